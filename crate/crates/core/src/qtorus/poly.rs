use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use super::coeff::TCoeff;
use super::monomial::{Monomial, Var};
use crate::error::Result;

/// An element of a quantum torus written in the commutative-monomial basis:
/// `sum_m c_m(t^{1/2}) m`. Multiplication needs a [`super::QuantumTorus`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QTPoly {
    terms: BTreeMap<Monomial, TCoeff>,
}

impl QTPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), TCoeff::one())
    }

    pub fn monomial(m: Monomial, c: TCoeff) -> Self {
        let mut p = Self::zero();
        p.add_term(m, &c);
        p
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::monomial(m, TCoeff::one())
    }

    pub fn var(v: Var) -> Self {
        Self::from_monomial(Monomial::var(v))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, TCoeff)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: &TCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &TCoeff)> {
        self.terms.iter()
    }

    pub fn lead(&self) -> Option<(&Monomial, &TCoeff)> {
        self.terms.iter().next_back()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.lead().map(|p| p.0)
    }

    pub fn coefficient(&self, m: &Monomial) -> TCoeff {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The single monomial if the polynomial is `c * m`.
    pub fn as_monomial(&self) -> Option<(&Monomial, &TCoeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn shift_t(&self, e: i32) -> Self {
        QTPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.shift(e))).collect() }
    }

    pub fn scale(&self, c: &TCoeff) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, d)| (m.clone(), d.mul(c))))
    }

    /// Coefficient-wise `t^{1/2} -> t^{-1/2}`.
    pub fn bar(&self) -> Self {
        QTPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.bar())).collect() }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.values().all(|c| c.is_bar_invariant())
    }

    /// Image at `t = 1` as a commutative Laurent polynomial.
    pub fn specialize_t1(&self) -> BTreeMap<Monomial, BigInt> {
        self.terms.iter().map(|(m, c)| (m.clone(), c.eval_at_one())).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Sum of all coefficients at `t = 1`.
    pub fn eval_coefficients_at_one(&self) -> BigInt {
        self.terms.values().map(|c| c.eval_at_one()).sum()
    }

    /// Applies a monomial map term by term (coefficients are kept).
    pub fn map_monomials<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&Monomial) -> Result<Monomial>,
    {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(f(m)?, c);
        }
        Ok(out)
    }

    /// Keeps the terms whose monomial satisfies the predicate.
    pub fn filter<F: FnMut(&Monomial) -> bool>(&self, mut keep: F) -> Self {
        QTPoly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_latex();
            let single = c.terms().len() == 1;
            let negative = single && cs.starts_with('-');
            if k > 0 {
                s.push_str(if negative { " - " } else { " + " });
            } else if negative {
                s.push('-');
            }
            let body = if negative { &cs[1..] } else { &cs[..] };
            let coeff = if body == "1" {
                String::new()
            } else if single {
                body.to_string()
            } else {
                format!("({body})")
            };
            match (coeff.is_empty(), m.is_one()) {
                (true, true) => s.push('1'),
                (true, false) => s.push_str(&m.to_latex()),
                (false, true) => s.push_str(&coeff),
                (false, false) => {
                    s.push_str(&coeff);
                    s.push(' ');
                    s.push_str(&m.to_latex());
                }
            }
        }
        s
    }
}

impl fmt::Display for QTPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_latex())
    }
}

impl Add for &QTPoly {
    type Output = QTPoly;
    fn add(self, rhs: &QTPoly) -> QTPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &QTPoly {
    type Output = QTPoly;
    fn sub(self, rhs: &QTPoly) -> QTPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &c.neg());
        }
        out
    }
}

impl Neg for &QTPoly {
    type Output = QTPoly;
    fn neg(self) -> QTPoly {
        QTPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }
}
