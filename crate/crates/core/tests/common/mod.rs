//! Generators and property checks shared by the property suite and the acceptance runner.
#![allow(dead_code)]

pub mod golden;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use proptest::prelude::*;
use qtchar_core::characters::kr_full;
use qtchar_core::format::{parse_poly, poly_from_json, poly_to_json, poly_to_text};
use qtchar_core::oplus::{multidegree, z_seed};
use qtchar_core::{
    Basis, Config, Frozen, HeightFunction, LieType, Monomial, QTPoly, QuantumSeed, QuantumTorus, SignConvention,
    TCoeff, Var, Vertex, WindowVariant,
};

pub type Check = std::result::Result<(), String>;

pub fn config(lie: &str, xi: &[u8]) -> Config {
    let l: LieType = lie.parse().unwrap();
    Config::new(l, HeightFunction::new(l, xi.to_vec()).unwrap(), SignConvention::Flipped).unwrap()
}

pub fn d4() -> Config {
    config("D4", &[1, 0, 1, 1])
}

pub fn torus() -> Arc<QuantumTorus> {
    static T: OnceLock<Arc<QuantumTorus>> = OnceLock::new();
    T.get_or_init(|| d4().torus_for_span(12).unwrap()).clone()
}

fn y_var() -> impl Strategy<Value = Var> {
    (1usize..=4, 0i32..4).prop_map(|(i, k)| {
        let top = if i == 2 { 0 } else { -1 };
        Var::Y(i, top - 2 * k)
    })
}

pub fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((y_var(), -2i32..=2), 0..4).prop_map(Monomial::from_entries)
}

pub fn coeff() -> impl Strategy<Value = TCoeff> {
    prop::collection::vec((-3i32..=3, -3i64..=3), 1..3)
        .prop_map(|v| TCoeff::from_terms(v.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

pub fn poly() -> impl Strategy<Value = QTPoly> {
    prop::collection::vec((monomial(), coeff()), 0..4).prop_map(QTPoly::from_terms)
}

pub fn nonzero_poly() -> impl Strategy<Value = QTPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn mul(a: &QTPoly, b: &QTPoly) -> QTPoly {
    torus().mul(a, b).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn associativity((a, b, c): (QTPoly, QTPoly, QTPoly)) -> Check {
    ensure(mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c)), || "associativity".into())
}

pub fn distributivity((a, b, c): (QTPoly, QTPoly, QTPoly)) -> Check {
    let left = mul(&a, &(&b + &c)) == &mul(&a, &b) + &mul(&a, &c);
    let right = mul(&(&a + &b), &c) == &mul(&a, &c) + &mul(&b, &c);
    ensure(left && right, || "distributivity".into())
}

pub fn bar_anti_automorphism((a, b): (QTPoly, QTPoly)) -> Check {
    ensure(mul(&a, &b).bar() == mul(&b.bar(), &a.bar()), || "bar(a*b) != bar(b)*bar(a)".into())
}

pub fn division_round_trip((s, q): (QTPoly, QTPoly)) -> Check {
    let p = mul(&s, &q);
    let back = torus().divide_exact_right(&p, &q).map_err(|e| e.to_string())?;
    ensure(back == s, || format!("({}) / ({}) gave {}", p.to_latex(), q.to_latex(), back.to_latex()))
}

pub fn serialization_round_trip(p: QTPoly) -> Check {
    let j = poly_to_json(Basis::Y, &p).map_err(|e| e.to_string())?;
    let text = serde_json::to_string(&j).unwrap();
    let (b, back) = poly_from_json(&serde_json::from_str(&text).unwrap()).map_err(|e| e.to_string())?;
    ensure(b == Basis::Y && back == p, || format!("json {text}"))?;
    let latex = parse_poly(&p.to_latex(), None).map_err(|e| e.to_string())?;
    ensure(latex == p, || format!("latex {}", p.to_latex()))?;
    let plain = parse_poly(&poly_to_text(&p), None).map_err(|e| e.to_string())?;
    ensure(plain == p, || format!("text {}", poly_to_text(&p)))
}

pub fn self_pairing_vanishes(m: Monomial) -> Check {
    ensure(torus().pairing_d(&m, &m).unwrap() == 0, || format!("D({m},{m}) != 0"))
}

fn commutative_product(a: &BTreeMap<Monomial, BigInt>, b: &BTreeMap<Monomial, BigInt>) -> BTreeMap<Monomial, BigInt> {
    let mut out: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            *out.entry(m1.mul(m2)).or_default() += c1 * c2;
        }
    }
    out.retain(|_, c| *c != BigInt::from(0));
    out
}

pub fn specialization_is_multiplicative((a, b): (QTPoly, QTPoly)) -> Check {
    let lhs = mul(&a, &b).specialize_t1();
    ensure(lhs == commutative_product(&a.specialize_t1(), &b.specialize_t1()), || "specialize_t1".into())
}

fn positive(p: &QTPoly) -> bool {
    p.terms().all(|(_, c)| c.terms().iter().all(|(_, k)| *k > BigInt::from(0)))
}

fn mutable(s: &QuantumSeed) -> Vec<Vertex> {
    let w = s.window();
    (0..w.len()).filter(|&k| w.frozen_kind(k) == Frozen::No).map(|k| w.vertices()[k]).collect()
}

/// Random walk of mutations; every variable stays bar-invariant, positive and (z-basis) homogeneous.
pub fn mutation_walk(initial: &QuantumSeed, picks: &[usize]) -> Check {
    let lie = initial.torus().lie();
    let choices = mutable(initial);
    let mut s = initial.clone();
    for &k in picks {
        let v = choices[k % choices.len()];
        s = s.mutate(v).map_err(|e| format!("mutate {v}: {e}"))?;
        let x = s.var(v).unwrap();
        ensure(x.is_bar_invariant(), || format!("{v} not bar-invariant"))?;
        ensure(positive(x), || format!("{v} has a negative coefficient: {}", x.to_latex()))?;
        if s.basis() == Basis::Z {
            multidegree(lie, x).map_err(|e| format!("{v}: {e}"))?;
        }
        ensure(s.compatibility_diagonal().ok() == Some(-2), || format!("compatibility after {v}"))?;
    }
    Ok(())
}

pub fn walk_seeds() -> Vec<QuantumSeed> {
    static S: OnceLock<Vec<QuantumSeed>> = OnceLock::new();
    S.get_or_init(|| {
        let a3 = config("A3", &[0, 1, 0]);
        let d4 = d4();
        vec![
            a3.seed(WindowVariant::Gminus, -4, Basis::Y).unwrap(),
            a3.seed(WindowVariant::Gminus, -4, Basis::U).unwrap(),
            z_seed(&d4, -4).unwrap(),
        ]
    })
    .clone()
}

pub fn walk() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0usize..3, prop::collection::vec(0usize..64, 1..6))
}

pub fn random_walk((which, picks): (usize, Vec<usize>)) -> Check {
    mutation_walk(&walk_seeds()[which], &picks)
}

pub fn kr_case() -> impl Strategy<Value = (usize, usize, i32)> {
    (1usize..=3, 1usize..=2, 0i32..3)
}

/// Deepening the window by 2 or 4 rows and shifting by -2 both act as expected.
pub fn stability_and_shift((i, k, d): (usize, usize, i32)) -> Check {
    let c = config("A3", &[1, 0, 1]);
    let r = c.xi.top(i) - 2 * (k as i32 - 1) - 2 * c.lie.half_coxeter() as i32 - 2 * d;
    let base = kr_full(&c, i, k, r, None).map_err(|e| e.to_string())?;
    ensure(positive(&base.poly), || "negative coefficient".into())?;
    for extra in [2, 4] {
        let deeper = kr_full(&c, i, k, r, Some(base.r_floor - extra)).map_err(|e| e.to_string())?;
        ensure(deeper.poly == base.poly, || format!("deepening by {extra}"))?;
    }
    let lower = kr_full(&c, i, k, r - 2, None).map_err(|e| e.to_string())?;
    let shifted = c.torus_for_span(0).unwrap().shift_spectral(&base.poly, -2).unwrap();
    ensure(lower.poly == shifted, || "shift".into())
}

/// Runs `cases` deterministic draws from `strategy`, returning (passed, total, first failure).
pub fn sample<S: Strategy>(strategy: S, cases: u32, check: impl Fn(S::Value) -> Check) -> (u32, u32, Option<String>) {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::{Config as PConfig, TestRng, TestRunner};
    let mut runner = TestRunner::new_with_rng(PConfig::default(), TestRng::deterministic_rng(Default::default()));
    let mut passed = 0;
    let mut first = None;
    for _ in 0..cases {
        let v = strategy.new_tree(&mut runner).unwrap().current();
        match check(v) {
            Ok(()) => passed += 1,
            Err(e) => {
                first.get_or_insert(e);
            }
        }
    }
    (passed, cases, first)
}
