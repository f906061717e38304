//! The z-seed on `Γ^-`: the embedding `𝒥` of the Y-torus into the z-torus,
//! multidegrees, gradings, and traced runs of `S_i`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cartan::{CartanData, HeightFunction, LieType, Node};
use crate::error::{Error, Result};
use crate::qcluster::{sequence_si, Basis, Config, MutationSequence, QuantumSeed};
use crate::qtorus::{Monomial, QTPoly, QuantumTorus, Var};
use crate::quiver::{Vertex, WindowVariant};

/// `Λ((i,r),(j,s))`, the pairing of `z_{i,r}` and `z_{j,s}`.
pub fn lambda(torus: &QuantumTorus, v: Vertex, w: Vertex) -> Result<i64> {
    torus.pair(torus.z(v.node, v.r), torus.z(w.node, w.r))
}

/// `𝒥 : Y_{i,r} -> z_{i,r} z_{i,r+2}^{-1}`
pub fn j_map(torus: &QuantumTorus, p: &QTPoly) -> Result<QTPoly> {
    p.map_monomials(|m| {
        m.substitute(|v| match v {
            Var::Y(i, r) => Ok(Monomial::from_entries([(torus.z(i, r), 1), (torus.z(i, r + 2), -1)])),
            other => Err(Error::BasisMismatch(format!("{other} is not a Y-variable"))),
        })
    })
}

/// Inverse of `𝒥` on its image (multidegree zero, one parity class per column).
pub fn j_inverse(torus: &QuantumTorus, p: &QTPoly) -> Result<QTPoly> {
    p.map_monomials(|m| {
        let mut cols: BTreeMap<Node, BTreeMap<i32, i32>> = BTreeMap::new();
        for &(v, e) in m.entries() {
            let (i, r) = match v {
                Var::Z(i, r) => (i, r),
                Var::F(j) => (j, torus.frozen_row(j)),
                other => return Err(Error::BasisMismatch(format!("{other} is not a z-variable"))),
            };
            cols.entry(i).or_default().insert(r, e);
        }
        let mut out = Vec::new();
        for (i, rows) in cols {
            let lo = *rows.keys().next().unwrap();
            let hi = *rows.keys().next_back().unwrap();
            if rows.keys().any(|r| (r - lo) % 2 != 0) {
                return Err(Error::NotInImage(format!("{m}: mixed parities in column {i}")));
            }
            let mut acc = 0;
            let mut r = lo;
            while r < hi {
                acc += rows.get(&r).copied().unwrap_or(0);
                if acc != 0 {
                    out.push((Var::Y(i, r), acc));
                }
                r += 2;
            }
            if acc + rows[&hi] != 0 {
                return Err(Error::NotInImage(format!("{m}: column {i} has nonzero degree")));
            }
        }
        Ok(Monomial::from_entries(out))
    })
}

/// `ρ : u_{i,r} -> z_{i,r} f_i^{-1}`
pub fn rho_map(torus: &QuantumTorus, p: &QTPoly) -> Result<QTPoly> {
    p.map_monomials(|m| {
        m.substitute(|v| match v {
            Var::U(i, r) => Ok(Monomial::from_entries([(torus.z(i, r), 1), (Var::F(i), -1)])),
            other => Err(Error::BasisMismatch(format!("{other} is not a u-variable"))),
        })
    })
}

/// Relabels spectral indices by `dr`.
pub fn shift_s(torus: &QuantumTorus, p: &QTPoly, dr: i32) -> Result<QTPoly> {
    torus.shift_spectral(p, dr)
}

/// The z-seed on the `Γ^-` window cut at `r_floor`.
pub fn z_seed(cfg: &Config, r_floor: i32) -> Result<QuantumSeed> {
    cfg.seed(WindowVariant::GammaMinus, r_floor, Basis::Z)
}

/// A vector in `Z^I`, printed as `e1+e3+e4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MultiDegree(pub Vec<i64>);

impl MultiDegree {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let coeff = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            write!(f, "{sign}{coeff}e{}", k + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn monomial_degree(rank: usize, m: &Monomial) -> Result<MultiDegree> {
    let mut d = vec![0i64; rank];
    for &(v, e) in m.entries() {
        match v {
            Var::Z(i, _) | Var::F(i) => d[i - 1] += e as i64,
            other => return Err(Error::BasisMismatch(format!("{other} has no multidegree"))),
        }
    }
    Ok(MultiDegree(d))
}

/// Multidegree with `deg z_{i,r} = deg f_i = e_i`; fails on inhomogeneous input.
pub fn multidegree(lie: LieType, p: &QTPoly) -> Result<MultiDegree> {
    let mut out: Option<MultiDegree> = None;
    for m in p.monomials() {
        let d = monomial_degree(lie.rank(), m)?;
        match &out {
            None => out = Some(d),
            Some(o) if *o != d => return Err(Error::Inhomogeneous(o.to_string(), d.to_string())),
            _ => {}
        }
    }
    Ok(out.unwrap_or(MultiDegree(vec![0; lie.rank()])))
}

/// `f^d = prod_j f_j^{d_j}`
pub fn frozen_monomial(d: &MultiDegree) -> Monomial {
    Monomial::from_entries(d.0.iter().enumerate().map(|(k, &e)| (Var::F(k + 1), e as i32)))
}

/// Writes a homogeneous z-polynomial as `𝒥(P) f^d`; returns `(P, d)`.
pub fn y_form(torus: &QuantumTorus, p: &QTPoly) -> Result<(QTPoly, MultiDegree)> {
    let d = multidegree(torus.lie(), p)?;
    let f = frozen_monomial(&d).inv();
    let stripped = p.map_monomials(|m| Ok(m.mul(&f)))?;
    Ok((j_inverse(torus, &stripped)?, d))
}

/// Grading `u_i(j,s) = δ_ij`.
pub fn grading_u(i: Node, w: Vertex) -> i64 {
    (w.node == i) as i64
}

/// Grading `t_i(j,s) = -ℱ_ij(2 - s - xi_i)`.
pub fn grading_t(cartan: &CartanData, xi: &HeightFunction, i: Node, w: Vertex) -> Result<i64> {
    Ok(-cartan.f_pair(i, w.node, (2 - w.r - xi.xi(i) as i32) as i64)?)
}

/// Result of running `S_i` on the z-seed.
#[derive(Clone, Debug)]
pub struct ZRun {
    pub node: Node,
    pub sequence: MutationSequence,
    /// `χ̃`: the z-seed variable at `(i, -xi_i)` after `S_i`.
    pub chi: QTPoly,
    /// The Y-seed variable after the same sequence.
    pub y_character: QTPoly,
    pub degree: MultiDegree,
    /// No negative powers of frozen variables.
    pub f_nonnegative: bool,
    /// `χ̃ = 𝒥(y_character) f^degree`.
    pub matches: bool,
}

/// Runs `S_i` on the z-seed and compares with the Y-seed run through `𝒥`.
pub fn run_fundamental_z(cfg: &Config, i: Node) -> Result<ZRun> {
    let seq = sequence_si(cfg.lie, &cfg.xi, i)?;
    let floor = seq.required_floor().unwrap_or(cfg.xi.top(i) - 2);
    let target = Vertex::new(i, cfg.xi.top(i));
    let zs = z_seed(cfg, floor)?.apply_sequence(&seq.steps)?;
    let chi = zs.var(target)?.clone();
    let ys = cfg.seed(WindowVariant::Gminus, floor, Basis::Y)?.apply_sequence(&seq.steps)?;
    let y_character = ys.var(target)?.clone();
    let torus = zs.torus();
    let degree = multidegree(cfg.lie, &chi)?;
    let f_nonnegative = chi.monomials().all(|m| m.entries().iter().all(|&(v, e)| !matches!(v, Var::F(_)) || e >= 0));
    let f = frozen_monomial(&degree);
    let expected = j_map(torus, &y_character)?.map_monomials(|m| Ok(m.mul(&f)))?;
    Ok(ZRun { node: i, sequence: seq, chi: chi.clone(), y_character, degree, f_nonnegative, matches: expected == chi })
}

/// One step of a traced run.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub step: usize,
    pub vertex: Vertex,
    /// How many times the vertex has been mutated so far (superscript `(p)`).
    pub pass: usize,
    pub poly: QTPoly,
    /// z-basis only: multidegree and the `𝒥^{-1}` form of `poly f^{-deg}`.
    pub degree: Option<MultiDegree>,
    pub y_form: Option<QTPoly>,
    pub seed: QuantumSeed,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub sequence: MutationSequence,
    pub initial: QuantumSeed,
    pub steps: Vec<TraceStep>,
}

/// Traced run of `S_i` in the z- or Y-basis, window cut just below the sequence.
pub fn trace(cfg: &Config, i: Node, basis: Basis) -> Result<Trace> {
    let seq = sequence_si(cfg.lie, &cfg.xi, i)?;
    let floor = seq.required_floor().unwrap_or(cfg.xi.top(i) - 2);
    let initial = match basis {
        Basis::Z => z_seed(cfg, floor)?,
        b => cfg.seed(WindowVariant::Gminus, floor, b)?,
    };
    trace_sequence(&initial, seq)
}

pub fn trace_sequence(initial: &QuantumSeed, seq: MutationSequence) -> Result<Trace> {
    let seeds = initial.apply_sequence_traced(&seq.steps)?;
    let mut counts: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut steps = Vec::with_capacity(seeds.len());
    for (k, (seed, &v)) in seeds.into_iter().zip(&seq.steps).enumerate() {
        let pass = {
            let c = counts.entry(v).or_default();
            *c += 1;
            *c
        };
        let poly = seed.var(v)?.clone();
        let (degree, y_form) = if initial.basis() == Basis::Z {
            let (y, d) = y_form(seed.torus(), &poly)?;
            (Some(d), Some(y))
        } else {
            (None, None)
        };
        steps.push(TraceStep { step: k + 1, vertex: v, pass, poly, degree, y_form, seed });
    }
    Ok(Trace { sequence: seq, initial: initial.clone(), steps })
}

/// `[W^{(i)}_{k,r-2m}]^-` through the u-seed and `η`, for cross-checks.
pub fn kr_character_via_u(cfg: &Config, v: Vertex, m: usize) -> Result<QTPoly> {
    let seq = crate::qcluster::dependency_schedule(cfg.lie, &cfg.xi, &[(v, m)], Some(v.node))?;
    let floor = seq.required_floor().unwrap_or(v.r).min(v.r);
    let s = cfg.seed(WindowVariant::Gminus, floor, Basis::U)?.apply_sequence(&seq.steps)?;
    crate::characters::eta(s.var(v)?)
}
