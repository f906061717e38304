//! One PASS/FAIL line per primary criterion, with pinned limits and measured timings.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use qtchar_core::characters::{fundamental_character, kr_truncated, tsystem_check};
use qtchar_core::format::parse_poly;
use qtchar_core::oplus::{j_inverse, multidegree, run_fundamental_z, trace};
use qtchar_core::{
    sequence_s, sequence_si, Basis, CartanData, Config, HeightFunction, LieType, Monomial, SignConvention, TCoeff, Var,
    WindowVariant,
};

use common::*;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn criterion(name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let r = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|_| outcome(false, "panicked"));
    let took = start.elapsed();
    let in_time = limit.is_none_or(|l| took <= l);
    let ok = r.ok && in_time;
    let limit_text = limit.map(|l| format!(" limit {:.0?}", l)).unwrap_or_default();
    println!(
        "{} {name}: {} [{:.3}s{limit_text}]",
        if ok { "PASS" } else { "FAIL" },
        if in_time { r.detail } else { format!("{} (over time)", r.detail) },
        took.as_secs_f64()
    );
    ok
}

fn lie(s: &str) -> LieType {
    s.parse().unwrap()
}

fn cartan_series() -> Outcome {
    let sl2 = CartanData::new(lie("A1"), 14);
    let want2 = [1, 0, -1, 0, 1, 0, -1, 0, 1, 0, -1, 0, 1, 0];
    let ok2 = (1..=14).map(|m| sl2.ctilde(1, 1, m).unwrap()).eq(want2);
    let sl3 = CartanData::new(lie("A2"), 14);
    let diag = [1, 0, 0, 0, -1, 0, 1, 0, 0, 0, -1, 0, 1, 0];
    let off = [0, 1, 0, -1, 0, 0, 0, 1, 0, -1, 0, 0, 0, 1];
    let ok3 = (1..=2)
        .all(|i| (1..=2).all(|j| (1..=14).map(|m| sl3.ctilde(i, j, m).unwrap()).eq(if i == j { diag } else { off })));
    outcome(ok2 && ok3, "sl2 and sl3 tables through degree 14")
}

fn compatible_pair() -> Outcome {
    let mut checked = 0;
    for t in ["A2", "A3", "D4", "D5"] {
        let l = lie(t);
        for parity in [0, 1] {
            let c = Config::new(l, HeightFunction::default_for(l, parity), SignConvention::Flipped).unwrap();
            let s = c.seed(WindowVariant::Gminus, -16, Basis::Y).unwrap();
            let rows = s.window().vertices().iter().filter(|v| v.node == 1).count();
            match s.compatibility_diagonal() {
                Ok(-2) if rows >= 8 => checked += 1,
                other => return outcome(false, format!("{t} parity {parity}: {other:?}, {rows} rows")),
            }
        }
    }
    outcome(true, format!("B^T L = -2 I on {checked} windows of depth 16"))
}

fn golden_trace() -> Outcome {
    let c = d4();
    let t = trace(&c, 2, Basis::Z).unwrap();
    let mut matched = Vec::new();
    for e in golden::load() {
        let s = &t.steps[e.step - 1];
        let want = parse_poly(&e.z, Some(&c.xi)).unwrap();
        if (s.vertex, s.pass) != (e.vertex, e.pass) || s.poly != want {
            return outcome(false, format!("step {} differs", e.step));
        }
        matched.push(e.step.to_string());
    }
    let s11 = &t.steps[10];
    let expanded: usize = s11.poly.terms().map(|(_, c)| c.terms().len()).sum();
    let ok = t.steps.len() == 15 && expanded == 92 && s11.poly.eval_coefficients_at_one() == BigInt::from(92);
    outcome(
        ok,
        format!(
            "steps {} match exactly; z_(2,-2)^(2) has {expanded} terms ({} monomials)",
            matched.join(","),
            s11.poly.len()
        ),
    )
}

fn multidegrees() -> Outcome {
    let c = d4();
    let t = trace(&c, 2, Basis::Z).unwrap();
    let want = [
        "e1+e3+e4", "e1+e3+e4", "e1+e3+e4", "e3+e4", "e3+e4", "e1+e4", "e1+e4", "e1+e3", "e1+e3", "e1+e3+e4",
        "e1+e3+e4", "e1", "e3", "e4", "0",
    ];
    let got: Vec<String> = t.steps.iter().map(|s| multidegree(c.lie, &s.poly).unwrap().to_string()).collect();
    let ok = got == want;
    outcome(ok, if ok { "15 of 15 degrees".to_string() } else { format!("got {got:?}") })
}

fn final_character() -> Outcome {
    let c = d4();
    let t = trace(&c, 2, Basis::Z).unwrap();
    let last = &t.steps[14];
    let chi = j_inverse(last.seed.torus(), &last.poly).unwrap();
    let f = fundamental_character(&c, 2, -6).unwrap().poly;
    let tt = TCoeff::from_terms([(2, BigInt::from(1)), (-2, BigInt::from(1))]);
    let special: Vec<(&Monomial, &TCoeff)> = chi.terms().filter(|(_, c)| !c.is_one()).collect();
    let target = Monomial::from_entries([(Var::Y(2, -4), 1), (Var::Y(2, -2), -1)]);
    let ok = chi == f
        && chi.len() == 28
        && special == vec![(&target, &tt)]
        && chi.eval_coefficients_at_one() == BigInt::from(29);
    outcome(ok, format!("{} monomials, one t+t^-1, t=1 sum {}", chi.len(), chi.eval_coefficients_at_one()))
}

fn tsystems() -> Outcome {
    let a1 = config("A1", &[0]);
    let sl2 = tsystem_check(&a1, 1, 1, -4, false, None).unwrap();
    if !(sl2.holds && sl2.alpha_half == Some(-2) && sl2.gamma_half == Some(0)) {
        return outcome(false, format!("sl2 calibration {sl2:?}"));
    }
    let mut n = 0;
    for t in ["A2", "A3", "D4"] {
        let l = lie(t);
        for parity in [0, 1] {
            let c = Config::new(l, HeightFunction::default_for(l, parity), SignConvention::Flipped).unwrap();
            for i in l.nodes() {
                for k in 1..=3 {
                    let r = c.xi.top(i) - 2 * k as i32 - 2;
                    let rep = tsystem_check(&c, i, k, r, false, None).unwrap();
                    if !(rep.holds && rep.exponents_match()) {
                        return outcome(false, format!("{t} parity {parity} node {i} k={k}: {rep:?}"));
                    }
                    n += 1;
                }
            }
        }
    }
    outcome(true, format!("{n} identities with exact exponents; sl2 alpha=-1 gamma=0"))
}

fn a2_truncated() -> Outcome {
    let c = config("A2", &[0, 1]);
    let cases = [
        (0, "Y_{1,0}"),
        (-2, "Y_{1,-2} + Y_{1,0}^{-1} Y_{2,-1}"),
        (-4, "Y_{1,-4} + Y_{1,-2}^{-1} Y_{2,-3} + Y_{2,-1}^{-1}"),
    ];
    for (r, s) in cases {
        let got = kr_truncated(&c, 1, 1, r, None).unwrap().poly.specialize_t1();
        if got != parse_poly(s, None).unwrap().specialize_t1() {
            return outcome(false, format!("r = {r}"));
        }
    }
    outcome(true, "3 of 3 characters")
}

fn exhaustive_named_runs() -> Result<usize, String> {
    let mut vars = 0;
    for (t, xi) in [("A2", vec![0, 1]), ("A3", vec![0, 1, 0]), ("D4", vec![1, 0, 1, 1])] {
        let c = config(t, &xi);
        let s0 = c.seed(WindowVariant::Gminus, -10, Basis::Y).unwrap();
        let seq = sequence_s(c.lie, &c.xi, None, 2, s0.window()).unwrap();
        let mut s = s0.clone();
        for &v in &seq.steps {
            s = s.mutate(v).map_err(|e| e.to_string())?;
            let x = s.var(v).unwrap();
            if !x.is_bar_invariant() || x.terms().any(|(_, c)| c.terms().iter().any(|(_, k)| *k < BigInt::from(0))) {
                return Err(format!("{t} {v} along S"));
            }
            vars += 1;
        }
        for i in c.lie.nodes() {
            let run = run_fundamental_z(&c, i).map_err(|e| e.to_string())?;
            let zs = trace(&c, i, Basis::Z).map_err(|e| e.to_string())?;
            for st in &zs.steps {
                if !st.poly.is_bar_invariant() || multidegree(c.lie, &st.poly).is_err() {
                    return Err(format!("{t} S_{i} step {}", st.step));
                }
                vars += 1;
            }
            if !(run.matches && run.f_nonnegative) {
                return Err(format!("{t} S_{i} z-run"));
            }
        }
    }
    Ok(vars)
}

fn property_suite() -> Outcome {
    let results = [
        ("associativity", sample((poly(), poly(), poly()), 200, associativity)),
        ("distributivity", sample((poly(), poly(), poly()), 200, distributivity)),
        ("bar anti-automorphism", sample((poly(), poly()), 200, bar_anti_automorphism)),
        ("division round trip", sample((poly(), nonzero_poly()), 200, division_round_trip)),
        ("serialization round trip", sample(poly(), 200, serialization_round_trip)),
        ("D(m,m)=0", sample(monomial(), 200, self_pairing_vanishes)),
        ("t=1 homomorphism", sample((poly(), poly()), 200, specialization_is_multiplicative)),
        ("mutation walks", sample(walk(), 60, random_walk)),
        ("stability and shift", sample(kr_case(), 12, stability_and_shift)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, (passed, total, first)) in &results {
        let rate = *passed as f64 / *total as f64;
        if rate < 0.95 {
            ok = false;
        }
        if let Some(e) = first {
            parts.push(format!("{name} {passed}/{total} first failure: {e}"));
        }
    }
    let total: u32 = results.iter().map(|r| r.1 .1).sum();
    let passed: u32 = results.iter().map(|r| r.1 .0).sum();
    match exhaustive_named_runs() {
        Ok(n) => parts.insert(0, format!("{passed}/{total} randomized (threshold 95% each); {n} named-run variables")),
        Err(e) => {
            ok = false;
            parts.insert(0, format!("named run failed at {e}"));
        }
    }
    outcome(ok, parts.join("; "))
}

fn step_bound() -> Outcome {
    let mut n = 0;
    for l in LieType::all_up_to_rank(8) {
        let hp = l.half_coxeter();
        let bound = l.rank() * hp * (hp + 1) / 2;
        for parity in [0, 1] {
            let xi = HeightFunction::default_for(l, parity);
            for i in l.nodes() {
                let len = sequence_si(l, &xi, i).unwrap().len();
                if len > bound {
                    return outcome(false, format!("{l} S_{i} has {len} > {bound}"));
                }
                n += 1;
            }
        }
    }
    let d4 = sequence_si(lie("D4"), &HeightFunction::new(lie("D4"), vec![1, 0, 1, 1]).unwrap(), 2).unwrap().len();
    outcome(d4 == 15, format!("{n} sequences within bound; D4 S_2 has {d4} steps"))
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        criterion("quantum Cartan series", Some(secs(1)), cartan_series),
        criterion("compatible pair", Some(secs(5)), compatible_pair),
        criterion("D4 golden trace", Some(secs(10)), golden_trace),
        criterion("D4 multidegrees", None, multidegrees),
        criterion("D4 final character", None, final_character),
        criterion("quantum T-systems", Some(secs(60)), tsystems),
        criterion("A2 truncated characters", None, a2_truncated),
        criterion("property suite", None, property_suite),
        criterion("step-count bound", None, step_bound),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
