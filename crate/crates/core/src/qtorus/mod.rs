//! Quantum tori over `Z[t^{±1/2}]` with exact arithmetic.
//!
//! Elements are stored in the commutative-monomial basis; the product is
//! `m1 * m2 = t^{D(m1,m2)/2} m1 m2` with `D` the bilinear extension of the
//! pairing of generators.

mod coeff;
mod monomial;
mod poly;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

pub use coeff::TCoeff;
pub use monomial::{Monomial, Var};
pub use poly::QTPoly;

use crate::cartan::{CartanData, HeightFunction, LieType, Node, SignConvention};
use crate::error::{Error, Result};

/// Pairing context shared by the Y-, u- and z-tori of one type and height function.
#[derive(Clone, Debug)]
pub struct QuantumTorus {
    cartan: Arc<CartanData>,
    xi: HeightFunction,
    sign: SignConvention,
}

impl QuantumTorus {
    pub fn new(lie: LieType, xi: HeightFunction, sign: SignConvention, horizon: usize) -> Result<Self> {
        let xi = HeightFunction::new(lie, xi.values().to_vec())?;
        Ok(QuantumTorus { cartan: Arc::new(CartanData::new(lie, horizon)), xi, sign })
    }

    pub fn lie(&self) -> LieType {
        self.cartan.lie()
    }

    pub fn xi(&self) -> &HeightFunction {
        &self.xi
    }

    pub fn sign(&self) -> SignConvention {
        self.sign
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn horizon(&self) -> usize {
        self.cartan.horizon()
    }

    /// `z_{j,r}`, written `f_j` when `r = -xi_j + 2`.
    pub fn z(&self, j: Node, r: i32) -> Var {
        if r == self.frozen_row(j) {
            Var::F(j)
        } else {
            Var::Z(j, r)
        }
    }

    /// Row `-xi_j + 2` of the frozen variable `f_j`.
    pub fn frozen_row(&self, j: Node) -> i32 {
        2 - self.xi.xi(j) as i32
    }

    fn z_index(&self, v: Var) -> Option<(Node, i32)> {
        match v {
            Var::Z(i, r) => Some((i, r)),
            Var::F(j) => Some((j, self.frozen_row(j))),
            _ => None,
        }
    }

    fn y_pair(&self, i: Node, r: i32, j: Node, s: i32) -> Result<i64> {
        Ok(-self.sign.factor() * self.cartan.n_pair(i, j, (s - r) as i64)?)
    }

    /// Exponent `P(a,b)` with `a * b = t^{P(a,b)} b * a`.
    pub fn pair(&self, a: Var, b: Var) -> Result<i64> {
        match (a, b) {
            (Var::Y(i, r), Var::Y(j, s)) => self.y_pair(i, r, j, s),
            (Var::U(i, r), Var::U(j, s)) => {
                // U_{i,r} = prod_{k>=0, r+2k<=0} Y_{i,r+2k}
                let mut total = 0;
                let mut a = r;
                while a <= 0 {
                    let mut b = s;
                    while b <= 0 {
                        total += self.y_pair(i, a, j, b)?;
                        b += 2;
                    }
                    a += 2;
                }
                Ok(total)
            }
            _ => match (self.z_index(a), self.z_index(b)) {
                (Some((i, r)), Some((j, s))) => Ok(-self.sign.factor() * self.cartan.f_pair(i, j, (s - r) as i64)?),
                _ => Err(Error::BasisMismatch(format!("{a} and {b}"))),
            },
        }
    }

    /// Bilinear extension `D(m1, m2)` of the pairing.
    pub fn pairing_d(&self, m1: &Monomial, m2: &Monomial) -> Result<i64> {
        let mut d = 0;
        for &(a, ea) in m1.entries() {
            for &(b, eb) in m2.entries() {
                d += ea as i64 * eb as i64 * self.pair(a, b)?;
            }
        }
        Ok(d)
    }

    fn pair_matrix(&self, rows: &[Var], cols: &[Var]) -> Result<Vec<Vec<i64>>> {
        rows.iter().map(|&a| cols.iter().map(|&b| self.pair(a, b)).collect()).collect()
    }

    /// `p * q`
    pub fn mul(&self, p: &QTPoly, q: &QTPoly) -> Result<QTPoly> {
        if p.is_zero() || q.is_zero() {
            return Ok(QTPoly::zero());
        }
        let pvars: Vec<Var> = p.vars().into_iter().collect();
        let qvars: Vec<Var> = q.vars().into_iter().collect();
        let pm = self.pair_matrix(&pvars, &qvars)?;
        let pidx: HashMap<Var, usize> = pvars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let qidx: HashMap<Var, usize> = qvars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let qterms: Vec<IndexedTerm> =
            q.terms().map(|(m, c)| (m.entries().iter().map(|&(v, e)| (qidx[&v], e as i64)).collect(), m, c)).collect();
        let mut acc: HashMap<Monomial, TCoeff> = HashMap::new();
        let mut row = vec![0i64; qvars.len()];
        for (m1, c1) in p.terms() {
            row.iter_mut().for_each(|x| *x = 0);
            for &(a, ea) in m1.entries() {
                let prow = &pm[pidx[&a]];
                for (x, y) in row.iter_mut().zip(prow) {
                    *x += ea as i64 * y;
                }
            }
            for (idx, m2, c2) in &qterms {
                let d: i64 = idx.iter().map(|&(b, eb)| eb * row[b]).sum();
                let c = c1.mul(c2).shift(to_i32(d)?);
                acc.entry(m1.mul(m2)).or_default().add_assign(&c);
            }
        }
        Ok(QTPoly::from_terms(acc))
    }

    /// `p * q * ...` left to right.
    pub fn mul_all<'a, I: IntoIterator<Item = &'a QTPoly>>(&self, it: I) -> Result<QTPoly> {
        let mut out = QTPoly::one();
        for p in it {
            out = self.mul(&out, p)?;
        }
        Ok(out)
    }

    /// `t^{-D(lead p, lead q)/2} p * q`; the commutative product for quasi-commuting elements.
    pub fn normalized_product(&self, p: &QTPoly, q: &QTPoly) -> Result<QTPoly> {
        let (Some(a), Some(b)) = (p.lead_monomial(), q.lead_monomial()) else {
            return Ok(QTPoly::zero());
        };
        let d = self.pairing_d(a, b)?;
        Ok(self.mul(p, q)?.shift_t(to_i32(-d)?))
    }

    /// Exponent `lambda` with `p * q = t^{lambda/2} q * p`, if the two quasi-commute.
    pub fn commutation_exponent(&self, p: &QTPoly, q: &QTPoly) -> Result<Option<i64>> {
        let (Some(a), Some(b)) = (p.lead_monomial(), q.lead_monomial()) else {
            return Ok(Some(0));
        };
        let lambda = 2 * self.pairing_d(a, b)?;
        let pq = self.mul(p, q)?;
        let qp = self.mul(q, p)?;
        Ok((pq == qp.shift_t(to_i32(lambda)?)).then_some(lambda))
    }

    pub fn pow(&self, p: &QTPoly, k: u32) -> Result<QTPoly> {
        let mut out = QTPoly::one();
        for _ in 0..k {
            out = self.mul(&out, p)?;
        }
        Ok(out)
    }

    /// Rescales by a power of `t^{1/2}` so that the leading coefficient is
    /// bar-invariant, then checks that the whole element is.
    pub fn bar_normalize(&self, p: &QTPoly) -> Result<QTPoly> {
        let Some((_, c)) = p.lead() else {
            return Ok(QTPoly::zero());
        };
        let s = c.min_exp().unwrap() + c.max_exp().unwrap();
        if s % 2 != 0 {
            return Err(Error::NotBarInvariant(format!("leading coefficient {c}")));
        }
        let out = p.shift_t(-s / 2);
        if !out.is_bar_invariant() {
            return Err(Error::NotBarInvariant(out.to_latex()));
        }
        Ok(out)
    }

    /// The unique `S` with `S * q = p`.
    pub fn divide_exact_right(&self, p: &QTPoly, q: &QTPoly) -> Result<QTPoly> {
        let Some((qlead, qc)) = q.lead() else {
            return Err(Error::NotDivisible("division by zero".into()));
        };
        if p.is_zero() {
            return Ok(QTPoly::zero());
        }
        // Newton box: quotient exponents lie in [min_p - min_q, max_p - max_q]
        let mut vars: Vec<Var> = p.vars().into_iter().collect();
        vars.extend(q.vars());
        vars.sort();
        vars.dedup();
        let range = |f: &QTPoly, v: Var| {
            let mut lo = i32::MAX;
            let mut hi = i32::MIN;
            for m in f.monomials() {
                let e = m.exponent(v);
                lo = lo.min(e);
                hi = hi.max(e);
            }
            (lo, hi)
        };
        let mut bounds: BTreeMap<Var, (i32, i32)> = BTreeMap::new();
        for &v in &vars {
            let (pl, ph) = range(p, v);
            let (ql, qh) = range(q, v);
            let (lo, hi) = (pl - ql, ph - qh);
            if lo > hi {
                return Err(Error::NotDivisible(format!("exponent range of {v} is empty")));
            }
            bounds.insert(v, (lo, hi));
        }
        let qvars: Vec<Var> = q.vars().into_iter().collect();
        let qidx: HashMap<Var, usize> = qvars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let qterms: Vec<IndexedTerm> =
            q.terms().map(|(m, c)| (m.entries().iter().map(|&(v, e)| (qidx[&v], e as i64)).collect(), m, c)).collect();
        let qinv = qlead.inv();
        let mut rem = p.clone();
        let mut quot = QTPoly::zero();
        while let Some((m, c)) = rem.lead() {
            let s = m.mul(&qinv);
            for (&v, &(lo, hi)) in &bounds {
                let e = s.exponent(v);
                if e < lo || e > hi {
                    return Err(Error::NotDivisible(format!("quotient term {s} leaves the Newton box")));
                }
            }
            let d = self.pairing_d(&s, qlead)?;
            let a = c
                .div_exact(qc)
                .ok_or_else(|| Error::NotDivisible(format!("coefficient {c} by {qc}")))?
                .shift(to_i32(-d)?);
            // rem -= (a s) * q
            let mut row = vec![0i64; qvars.len()];
            for &(x, ex) in s.entries() {
                for (k, &b) in qvars.iter().enumerate() {
                    row[k] += ex as i64 * self.pair(x, b)?;
                }
            }
            let neg = a.neg();
            for (idx, m2, c2) in &qterms {
                let dd: i64 = idx.iter().map(|&(b, eb)| eb * row[b]).sum();
                rem.add_term(s.mul(m2), &neg.mul(c2).shift(to_i32(dd)?));
            }
            quot.add_term(s, &a);
        }
        Ok(quot)
    }

    /// Relabels every spectral index by `dr` (frozen variables included).
    pub fn shift_spectral(&self, p: &QTPoly, dr: i32) -> Result<QTPoly> {
        p.map_monomials(|m| {
            m.substitute(|v| {
                Ok(Monomial::var(match v {
                    Var::Y(i, r) => Var::Y(i, r + dr),
                    Var::U(i, r) => Var::U(i, r + dr),
                    Var::Z(i, r) => self.z(i, r + dr),
                    Var::F(j) => self.z(j, self.frozen_row(j) + dr),
                }))
            })
        })
    }
}

/// A term with its exponents indexed into a variable list.
type IndexedTerm<'a> = (Vec<(usize, i64)>, &'a Monomial, &'a TCoeff);

fn to_i32(d: i64) -> Result<i32> {
    i32::try_from(d).map_err(|_| Error::Invariant(format!("t-exponent {d} overflows")))
}
