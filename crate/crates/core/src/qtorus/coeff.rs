use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A Laurent polynomial in `t^{1/2}` with integer coefficients.
///
/// Stored as `(e, c)` pairs meaning `c * t^{e/2}`, sorted by `e`, no zero `c`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TCoeff {
    terms: Vec<(i32, BigInt)>,
}

impl TCoeff {
    pub fn zero() -> Self {
        TCoeff { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    /// `c * t^{e/2}`
    pub fn monomial(e: i32, c: BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TCoeff { terms: vec![(e, c)] }
    }

    pub fn from_int(c: i64) -> Self {
        Self::monomial(0, BigInt::from(c))
    }

    /// Builds from arbitrary pairs, merging repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (i32, BigInt)>>(it: I) -> Self {
        let mut v: Vec<(i32, BigInt)> = it.into_iter().collect();
        v.sort_by_key(|p| p.0);
        let mut out: Vec<(i32, BigInt)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        TCoeff { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn terms(&self) -> &[(i32, BigInt)] {
        &self.terms
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.first().map(|p| p.0)
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.last().map(|p| p.0)
    }

    /// Multiply by `t^{e/2}`.
    pub fn shift(&self, e: i32) -> Self {
        TCoeff { terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect() }
    }

    /// `t^{1/2} -> t^{-1/2}`
    pub fn bar(&self) -> Self {
        TCoeff { terms: self.terms.iter().rev().map(|(k, c)| (-k, c.clone())).collect() }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn neg(&self) -> Self {
        TCoeff { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            if j == other.terms.len() || (i < self.terms.len() && self.terms[i].0 < other.terms[j].0) {
                out.push(self.terms[i].clone());
                i += 1;
            } else if i == self.terms.len() || other.terms[j].0 < self.terms[i].0 {
                out.push(other.terms[j].clone());
                j += 1;
            } else {
                let c = &self.terms[i].1 + &other.terms[j].1;
                if !c.is_zero() {
                    out.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        TCoeff { terms: out }
    }

    pub fn add_assign(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        if self.terms.len() == 1 && other.terms.len() == 1 && self.terms[0].0 == other.terms[0].0 {
            self.terms[0].1 += &other.terms[0].1;
            if self.terms[0].1.is_zero() {
                self.terms.clear();
            }
            return;
        }
        *self = self.add(other);
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.terms.len() == 1 && other.terms.len() == 1 {
            let (a, c) = &self.terms[0];
            let (b, d) = &other.terms[0];
            return TCoeff { terms: vec![(a + b, c * d)] };
        }
        TCoeff::from_terms(self.terms.iter().flat_map(|(a, c)| other.terms.iter().map(move |(b, d)| (a + b, c * d))))
    }

    /// Exact quotient `self / other` in `Z[t^{±1/2}]`, if it exists.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if other.terms.len() == 1 {
            let (b, d) = &other.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (a, c) in &self.terms {
                let (q, r) = c.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                out.push((a - b, q));
            }
            return Some(TCoeff { terms: out });
        }
        // long division from the top degree down
        let (dtop, dlead) = other.terms.last().unwrap().clone();
        let dlow = other.terms[0].0;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rtop, rlead)) = rem.terms.last().cloned() {
            if rtop - dtop < rem.terms[0].0 - dlow {
                return None;
            }
            let (q, r) = rlead.div_rem(&dlead);
            if !r.is_zero() {
                return None;
            }
            let e = rtop - dtop;
            rem = rem.sub(&other.mul(&TCoeff::monomial(e, q.clone())));
            quot.push((e, q));
        }
        Some(TCoeff::from_terms(quot))
    }

    /// Human readable form in `t`, e.g. `t+t^{-1}`; half powers print as `t^{1/2}`.
    pub fn to_latex(&self) -> String {
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx > 0 {
                s.push(if neg { '-' } else { '+' });
            } else if neg {
                s.push('-');
            }
            let pow = t_power_latex(*e);
            if pow.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                }
                s.push_str(&pow);
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

fn t_power_latex(e: i32) -> String {
    match e {
        0 => String::new(),
        2 => "t".to_string(),
        e if e % 2 == 0 => format!("t^{{{}}}", e / 2),
        e => format!("t^{{{}/2}}", e),
    }
}

impl fmt::Display for TCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_latex())
    }
}
