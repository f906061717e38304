use std::cmp::Ordering;
use std::fmt;

use crate::cartan::Node;

/// Generators of the various quantum tori.
///
/// `Y` and `U` live in the Y-torus and the u-torus; `Z` and `F` in the z-torus,
/// where `F(j)` is the frozen variable `z_{j,-xi_j+2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Y(Node, i32),
    U(Node, i32),
    Z(Node, i32),
    F(Node),
}

impl Var {
    fn kind_rank(&self) -> u8 {
        match self {
            Var::Y(..) => 0,
            Var::U(..) => 1,
            Var::Z(..) => 2,
            Var::F(..) => 3,
        }
    }

    pub fn node(&self) -> Node {
        match *self {
            Var::Y(i, _) | Var::U(i, _) | Var::Z(i, _) | Var::F(i) => i,
        }
    }

    /// Spectral index, `None` for frozen `F`.
    pub fn r(&self) -> Option<i32> {
        match *self {
            Var::Y(_, r) | Var::U(_, r) | Var::Z(_, r) => Some(r),
            Var::F(_) => None,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Var::Y(..) => "Y",
            Var::U(..) => "u",
            Var::Z(..) => "z",
            Var::F(..) => "f",
        }
    }
}

/// Enumeration order: kind, then node, then decreasing `r`.
impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind_rank()
            .cmp(&other.kind_rank())
            .then(self.node().cmp(&other.node()))
            .then(other.r().unwrap_or(i32::MAX).cmp(&self.r().unwrap_or(i32::MAX)))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::F(j) => write!(f, "f_{{{j}}}"),
            v => write!(f, "{}_{{{},{}}}", v.symbol(), v.node(), v.r().unwrap()),
        }
    }
}

/// A Laurent monomial (commutative exponent vector).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: i64,
    entries: Vec<(Var, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::pow_var(v, 1)
    }

    pub fn pow_var(v: Var, e: i32) -> Self {
        Self::from_entries([(v, e)])
    }

    /// Canonicalizes: sorts, merges repeated variables and drops zero exponents.
    pub fn from_entries<I: IntoIterator<Item = (Var, i32)>>(it: I) -> Self {
        let mut v: Vec<(Var, i32)> = it.into_iter().collect();
        v.sort_by_key(|a| a.0);
        let mut out: Vec<(Var, i32)> = Vec::with_capacity(v.len());
        for (x, e) in v {
            match out.last_mut() {
                Some((lx, le)) if *lx == x => *le += e,
                _ => out.push((x, e)),
            }
        }
        out.retain(|p| p.1 != 0);
        let degree = out.iter().map(|p| p.1 as i64).sum();
        Monomial { degree, entries: out }
    }

    pub fn entries(&self) -> &[(Var, i32)] {
        &self.entries
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.entries.binary_search_by(|p| p.0.cmp(&v)).map(|k| self.entries[k].1).unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.entries.iter().map(|p| p.0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial { degree: self.degree + other.degree, entries: out }
    }

    pub fn inv(&self) -> Monomial {
        Monomial { degree: -self.degree, entries: self.entries.iter().map(|&(v, e)| (v, -e)).collect() }
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial { degree: self.degree * k as i64, entries: self.entries.iter().map(|&(v, e)| (v, e * k)).collect() }
    }

    /// Non-negative exponents everywhere.
    pub fn is_dominant(&self) -> bool {
        self.entries.iter().all(|p| p.1 > 0)
    }

    /// Substitutes each variable by a monomial.
    pub fn substitute<F>(&self, mut f: F) -> crate::error::Result<Monomial>
    where
        F: FnMut(Var) -> crate::error::Result<Monomial>,
    {
        let mut out = Monomial::one();
        for &(v, e) in &self.entries {
            out = out.mul(&f(v)?.pow(e));
        }
        Ok(out)
    }

    pub fn to_latex(&self) -> String {
        let mut s = String::new();
        for (k, (v, e)) in self.entries.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            s.push_str(&v.to_string());
            if *e != 1 {
                s.push_str(&format!("^{{{e}}}"));
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

/// Graded lexicographic: total degree first, then the exponent of the first
/// variable (in enumeration order) where the two differ.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.degree != other.degree {
            return self.degree.cmp(&other.degree);
        }
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&(_, eb))) => return 0.cmp(&eb),
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_latex())
    }
}
