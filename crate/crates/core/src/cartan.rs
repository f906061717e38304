//! Simply-laced Cartan data, height functions and the inverse quantum Cartan
//! matrix expansion together with the derived integer-valued functions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dynkin nodes are numbered from 1.
pub type Node = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

/// A simply-laced type `A_n` (n >= 1), `D_n` (n >= 4) or `E_6, E_7, E_8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieType {
    family: Family,
    rank: usize,
}

impl LieType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if !ok {
            return Err(Error::InvalidType(format!("{family:?}{rank}")));
        }
        Ok(LieType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        1..=self.rank
    }

    /// Edges of the Dynkin diagram, numbered as in Kac's tables.
    pub fn edges(&self) -> Vec<(Node, Node)> {
        let n = self.rank;
        match self.family {
            Family::A => (1..n).map(|i| (i, i + 1)).collect(),
            Family::D => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
                e.push((n - 2, n));
                e
            }
            Family::E => {
                // chain 1..n-1, extra node n attached to node n-3
                let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n));
                e
            }
        }
    }

    pub fn adjacent(&self, i: Node, j: Node) -> bool {
        self.edges().iter().any(|&(a, b)| (a == i && b == j) || (a == j && b == i))
    }

    pub fn neighbors(&self, i: Node) -> Vec<Node> {
        let mut out: Vec<Node> = self
            .edges()
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn check_node(&self, i: Node) -> Result<()> {
        if i == 0 || i > self.rank {
            return Err(Error::InvalidNode { lie: self.to_string(), node: i });
        }
        Ok(())
    }

    pub fn coxeter_number(&self) -> usize {
        match (self.family, self.rank) {
            (Family::A, n) => n + 1,
            (Family::D, n) => 2 * n - 2,
            (Family::E, 6) => 12,
            (Family::E, 7) => 18,
            (_, _) => 30,
        }
    }

    /// `h' = ceil(h/2)`
    pub fn half_coxeter(&self) -> usize {
        self.coxeter_number().div_ceil(2)
    }

    pub fn cartan_entry(&self, i: Node, j: Node) -> i64 {
        if i == j {
            2
        } else if self.adjacent(i, j) {
            -1
        } else {
            0
        }
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.nodes().map(|i| self.nodes().map(|j| self.cartan_entry(i, j)).collect()).collect()
    }

    /// Every simply-laced type of rank at most `max_rank`.
    pub fn all_up_to_rank(max_rank: usize) -> Vec<LieType> {
        let mut out = Vec::new();
        for n in 1..=max_rank {
            out.push(LieType { family: Family::A, rank: n });
        }
        for n in 4..=max_rank {
            out.push(LieType { family: Family::D, rank: n });
        }
        for n in 6..=max_rank.min(8) {
            out.push(LieType { family: Family::E, rank: n });
        }
        out
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidType(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(bad()),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest.parse().map_err(|_| bad())?;
        LieType::new(family, rank).map_err(|_| bad())
    }
}

impl Serialize for LieType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LieType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A height function `xi : I -> {0,1}` with `xi_i != xi_j` on every edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeightFunction {
    values: Vec<u8>,
}

impl HeightFunction {
    /// `values[k]` is the height of node `k+1`.
    pub fn new(lie: LieType, values: Vec<u8>) -> Result<Self> {
        if values.len() != lie.rank() {
            return Err(Error::InvalidHeight(format!("expected {} values, got {}", lie.rank(), values.len())));
        }
        if let Some(v) = values.iter().find(|&&v| v > 1) {
            return Err(Error::InvalidHeight(format!("value {v} not in {{0,1}}")));
        }
        for (a, b) in lie.edges() {
            if values[a - 1] == values[b - 1] {
                return Err(Error::InvalidHeight(format!(
                    "adjacent nodes {a} and {b} share the value {}",
                    values[a - 1]
                )));
            }
        }
        Ok(HeightFunction { values })
    }

    /// The unique height function with `xi_1 = seed_parity` (Dynkin diagrams are bipartite trees).
    pub fn default_for(lie: LieType, seed_parity: u8) -> Self {
        let n = lie.rank();
        let mut values = vec![u8::MAX; n];
        values[0] = seed_parity & 1;
        let mut stack = vec![1usize];
        while let Some(i) = stack.pop() {
            for j in lie.neighbors(i) {
                if values[j - 1] == u8::MAX {
                    values[j - 1] = 1 - values[i - 1];
                    stack.push(j);
                }
            }
        }
        HeightFunction { values }
    }

    /// The height function with `xi_i = parity` at the given node.
    pub fn with_node_parity(lie: LieType, node: Node, parity: u8) -> Self {
        let h = Self::default_for(lie, 0);
        if h.xi(node) == parity & 1 {
            h
        } else {
            h.flipped()
        }
    }

    pub fn xi(&self, i: Node) -> u8 {
        self.values[i - 1]
    }

    /// `(-1)^xi_i`
    pub fn epsilon(&self, i: Node) -> i32 {
        if self.xi(i) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn flipped(&self) -> Self {
        HeightFunction { values: self.values.iter().map(|v| 1 - v).collect() }
    }

    /// `(i, r)` belongs to the index set `Î` iff `r = xi_i mod 2`.
    pub fn in_i_hat(&self, i: Node, r: i32) -> bool {
        r.rem_euclid(2) as u8 == self.xi(i)
    }

    /// Topmost row of column `i` in the negative half: `-xi_i`.
    pub fn top(&self, i: Node) -> i32 {
        -(self.xi(i) as i32)
    }

    /// Column order with all `xi = 0` columns first. A `first` node is moved
    /// to the front of its parity class.
    pub fn column_order(&self, first: Option<Node>) -> Vec<Node> {
        let n = self.values.len();
        let mut cols: Vec<Node> = (1..=n).collect();
        cols.sort_by_key(|&i| (self.xi(i), Some(i) != first, i));
        cols
    }
}

/// Sign convention of the quasi-commutation exponent.
///
/// `Flipped` pairs `Y_{i,r}` and `Y_{j,s}` by `N_ij(s-r)`; `Printed` by `N_ij(r-s)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    Printed,
    #[default]
    Flipped,
}

impl SignConvention {
    pub fn factor(&self) -> i64 {
        match self {
            SignConvention::Printed => 1,
            SignConvention::Flipped => -1,
        }
    }
}

impl FromStr for SignConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "printed" => Ok(SignConvention::Printed),
            "flipped" => Ok(SignConvention::Flipped),
            other => Err(Error::InvalidArgument(format!("unknown sign convention `{other}`"))),
        }
    }
}

/// Coefficient tables of `C̃_ij(z) = sum_m C̃_ij(m) z^m` up to a horizon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanData {
    lie: LieType,
    horizon: usize,
    /// `ctilde[i-1][j-1][m]` for `0 <= m <= horizon`
    ctilde: Vec<Vec<Vec<i64>>>,
}

impl CartanData {
    /// Fills the tables with the recurrence
    /// `C̃_ij(m+1) = sum_{k~j} C̃_ik(m) - C̃_ij(m-1)`, `C̃(0)=0`, `C̃(1)=id`.
    pub fn new(lie: LieType, horizon: usize) -> Self {
        let n = lie.rank();
        let horizon = horizon.max(2);
        let nbrs: Vec<Vec<Node>> = lie.nodes().map(|j| lie.neighbors(j)).collect();
        let mut ctilde = vec![vec![vec![0i64; horizon + 1]; n]; n];
        for (i, row) in ctilde.iter_mut().enumerate() {
            row[i][1] = 1;
        }
        for m in 1..horizon {
            for row in ctilde.iter_mut() {
                for (j, nb) in nbrs.iter().enumerate() {
                    let s: i64 = nb.iter().map(|&k| row[k - 1][m]).sum();
                    row[j][m + 1] = s - row[j][m - 1];
                }
            }
        }
        CartanData { lie, horizon, ctilde }
    }

    /// Horizon large enough for every type of rank `<= 8` and windows of the given height.
    pub fn horizon_for(lie: LieType, window_height: usize) -> usize {
        (2 * lie.coxeter_number() + 4).max(window_height + 6)
    }

    pub fn lie(&self) -> LieType {
        self.lie
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    fn check(&self, m: i64) -> Result<()> {
        if m > self.horizon as i64 {
            return Err(Error::HorizonExceeded { requested: m, horizon: self.horizon });
        }
        Ok(())
    }

    /// `C̃_ij(m)`, zero for `m <= 0`.
    pub fn ctilde(&self, i: Node, j: Node, m: i64) -> Result<i64> {
        if m <= 0 {
            return Ok(0);
        }
        self.check(m)?;
        Ok(self.ctilde[i - 1][j - 1][m as usize])
    }

    /// `𝐂_ij(m) = C̃_ij(m) + C̃_ij(-m)`
    pub fn c_sym(&self, i: Node, j: Node, m: i64) -> Result<i64> {
        self.ctilde(i, j, m.abs())
    }

    /// `𝒩_ij(m) = 𝐂_ij(m+1) - 𝐂_ij(m-1)`
    pub fn n_pair(&self, i: Node, j: Node, m: i64) -> Result<i64> {
        Ok(self.c_sym(i, j, m + 1)? - self.c_sym(i, j, m - 1)?)
    }

    /// `ℱ_ij(m) = -sum_{k>=1, 2k-1<=m} C̃_ij(m-2k+1)` for `m >= 0`, odd extension for `m < 0`.
    pub fn f_pair(&self, i: Node, j: Node, m: i64) -> Result<i64> {
        if m < 0 {
            return Ok(-self.f_pair(i, j, -m)?);
        }
        self.check(m - 1)?;
        let mut s = 0;
        let mut k = 1;
        while 2 * k - 1 <= m {
            s += self.ctilde(i, j, m - 2 * k + 1)?;
            k += 1;
        }
        Ok(-s)
    }

    /// Exponents `(alpha, gamma)` of the quantum T-system, in units of `t^{1/2}`:
    /// `alpha = -1 + (C̃_ii(2k-1) + C̃_ii(2k+1))/2`, `gamma = alpha + 1`.
    pub fn tsystem_exponents(&self, i: Node, k: usize) -> Result<(i64, i64)> {
        let k = k as i64;
        let a = -2 + self.ctilde(i, i, 2 * k - 1)? + self.ctilde(i, i, 2 * k + 1)?;
        Ok((a, a + 2))
    }

    /// Table rows `[i][j] -> [C̃_ij(0..=max)]`.
    pub fn table(&self, max_degree: usize) -> Result<Vec<Vec<Vec<i64>>>> {
        self.check(max_degree as i64)?;
        Ok(self.ctilde.iter().map(|row| row.iter().map(|s| s[..=max_degree].to_vec()).collect()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["A1", "A7", "D4", "D5", "E6", "E7", "E8"] {
            assert_eq!(s.parse::<LieType>().unwrap().to_string(), s);
        }
        for s in ["A0", "D3", "E5", "E9", "B2", "", "A"] {
            assert!(s.parse::<LieType>().is_err(), "{s}");
        }
    }

    #[test]
    fn coxeter_numbers() {
        let h = |s: &str| s.parse::<LieType>().unwrap().coxeter_number();
        assert_eq!(h("A1"), 2);
        assert_eq!(h("A4"), 5);
        assert_eq!(h("D4"), 6);
        assert_eq!(h("D7"), 12);
        assert_eq!(h("E6"), 12);
        assert_eq!(h("E7"), 18);
        assert_eq!(h("E8"), 30);
    }

    #[test]
    fn edges_form_a_tree() {
        for lie in LieType::all_up_to_rank(8) {
            assert_eq!(lie.edges().len(), lie.rank() - 1);
            let xi = HeightFunction::default_for(lie, 1);
            HeightFunction::new(lie, xi.values().to_vec()).unwrap();
        }
        let d4: LieType = "D4".parse().unwrap();
        assert_eq!(d4.neighbors(2), vec![1, 3, 4]);
    }

    #[test]
    fn height_validation() {
        let a3: LieType = "A3".parse().unwrap();
        assert!(HeightFunction::new(a3, vec![0, 1, 0]).is_ok());
        assert!(HeightFunction::new(a3, vec![0, 0, 1]).is_err());
        assert!(HeightFunction::new(a3, vec![0, 1]).is_err());
        let h = HeightFunction::with_node_parity(a3, 2, 0);
        assert_eq!(h.values(), &[1, 0, 1]);
        assert_eq!(h.column_order(Some(3)), vec![2, 3, 1]);
    }

    #[test]
    fn sl2_values() {
        let c = CartanData::new("A1".parse().unwrap(), 12);
        let v: Vec<i64> = (0..=8).map(|m| c.ctilde(1, 1, m).unwrap()).collect();
        assert_eq!(v, vec![0, 1, 0, -1, 0, 1, 0, -1, 0]);
        assert_eq!(c.n_pair(1, 1, 2).unwrap(), -2);
        assert_eq!(c.n_pair(1, 1, -2).unwrap(), 2);
        assert_eq!(c.n_pair(1, 1, 1).unwrap(), 0);
        assert_eq!(c.f_pair(1, 1, 2).unwrap(), -1);
        assert!(c.ctilde(1, 1, 13).is_err());
    }
}
