//! Vertex windows of the infinite quivers `G^-`, `Γ^-` and `Γ`, and exchange matrices.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::{HeightFunction, LieType, Node};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub node: Node,
    pub r: i32,
}

impl Vertex {
    pub fn new(node: Node, r: i32) -> Self {
        Vertex { node, r }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.node, self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowVariant {
    /// `r <= 0`, no frozen top row.
    Gminus,
    /// `r <= 2` with the row `r = -xi_i + 2` frozen.
    GammaMinus,
    /// `r_floor <= r <= r_ceil` in the full quiver `Γ`.
    GammaWindow { r_ceil: i32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frozen {
    No,
    Top,
    Floor,
}

/// A finite set of vertices `(i, r)` with `r = xi_i mod 2`, cut below at `r_floor`.
///
/// Floor vertices (some neighbour of the infinite quiver lies below the cut) are frozen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexWindow {
    lie: LieType,
    xi: HeightFunction,
    variant: WindowVariant,
    r_floor: i32,
    vertices: Vec<Vertex>,
    frozen: Vec<Frozen>,
    index: HashMap<Vertex, usize>,
}

impl VertexWindow {
    pub fn new(lie: LieType, xi: HeightFunction, variant: WindowVariant, r_floor: i32) -> Result<Self> {
        let xi = HeightFunction::new(lie, xi.values().to_vec())?;
        let ceil_of = |i: Node| -> i32 {
            match variant {
                WindowVariant::Gminus => xi.top(i),
                WindowVariant::GammaMinus => xi.top(i) + 2,
                WindowVariant::GammaWindow { r_ceil } => {
                    if xi.in_i_hat(i, r_ceil) {
                        r_ceil
                    } else {
                        r_ceil - 1
                    }
                }
            }
        };
        let mut vertices = Vec::new();
        for i in lie.nodes() {
            let mut r = ceil_of(i);
            while r >= r_floor {
                vertices.push(Vertex::new(i, r));
                r -= 2;
            }
        }
        if vertices.is_empty() {
            return Err(Error::InvalidArgument(format!("empty window at r_floor {r_floor}")));
        }
        let index: HashMap<Vertex, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let frozen = vertices
            .iter()
            .map(|v| {
                let below = std::iter::once(Vertex::new(v.node, v.r - 2))
                    .chain(lie.neighbors(v.node).into_iter().map(|j| Vertex::new(j, v.r - 1)));
                let top = match variant {
                    WindowVariant::Gminus => false,
                    WindowVariant::GammaMinus => v.r > 0,
                    WindowVariant::GammaWindow { .. } => std::iter::once(Vertex::new(v.node, v.r + 2))
                        .chain(lie.neighbors(v.node).into_iter().map(|j| Vertex::new(j, v.r + 1)))
                        .any(|w| !index.contains_key(&w)),
                };
                if top {
                    Frozen::Top
                } else if below.into_iter().any(|w| !index.contains_key(&w)) {
                    Frozen::Floor
                } else {
                    Frozen::No
                }
            })
            .collect();
        Ok(VertexWindow { lie, xi, variant, r_floor, vertices, frozen, index })
    }

    pub fn lie(&self) -> LieType {
        self.lie
    }

    pub fn xi(&self) -> &HeightFunction {
        &self.xi
    }

    pub fn variant(&self) -> WindowVariant {
        self.variant
    }

    pub fn r_floor(&self) -> i32 {
        self.r_floor
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: Vertex) -> Result<usize> {
        self.index.get(&v).copied().ok_or(Error::VertexNotInWindow(v))
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index.contains_key(&v)
    }

    pub fn frozen_kind(&self, k: usize) -> Frozen {
        self.frozen[k]
    }

    pub fn is_frozen(&self, k: usize) -> bool {
        self.frozen[k] != Frozen::No
    }

    pub fn mutable_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&k| !self.is_frozen(k))
    }

    /// Exchange matrix of the window: `B(v,w) = #(v -> w) - #(w -> v)`, where
    /// `(i,r) -> (j,s)` iff `C_ij != 0` and `s = r + C_ij`. Arrows between two
    /// top-frozen vertices are dropped.
    pub fn exchange_matrix(&self) -> ExchangeMatrix {
        let n = self.len();
        let mut b = ExchangeMatrix::zero(n);
        for (p, v) in self.vertices.iter().enumerate() {
            let mut targets = vec![Vertex::new(v.node, v.r + 2)];
            targets.extend(self.lie.neighbors(v.node).into_iter().map(|j| Vertex::new(j, v.r - 1)));
            for w in targets {
                if let Some(&q) = self.index.get(&w) {
                    if self.frozen[p] == Frozen::Top && self.frozen[q] == Frozen::Top {
                        continue;
                    }
                    b.add(p, q, 1);
                    b.add(q, p, -1);
                }
            }
        }
        b
    }
}

/// `build_window(type, xi, variant, r_floor)`
pub fn build_window(
    lie: LieType,
    xi: &HeightFunction,
    variant: WindowVariant,
    r_floor: i32,
) -> Result<(VertexWindow, ExchangeMatrix)> {
    let w = VertexWindow::new(lie, xi.clone(), variant, r_floor)?;
    let b = w.exchange_matrix();
    Ok((w, b))
}

/// `#{k >= 0 : r + 2k <= 0}`, the number of Y-factors of the initial variable at `(i, r)`.
pub fn k_factors(v: Vertex) -> Result<usize> {
    if v.r > 0 {
        return Err(Error::BadIndex(v.node, v.r));
    }
    Ok((-v.r / 2) as usize + 1)
}

/// Skew-symmetric integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeMatrix {
    n: usize,
    data: Vec<i64>,
}

impl ExchangeMatrix {
    pub fn zero(n: usize) -> Self {
        ExchangeMatrix { n, data: vec![0; n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, v: usize, w: usize) -> i64 {
        self.data[v * self.n + w]
    }

    pub fn set(&mut self, v: usize, w: usize, x: i64) {
        self.data[v * self.n + w] = x;
    }

    fn add(&mut self, v: usize, w: usize, x: i64) {
        self.data[v * self.n + w] += x;
    }

    pub fn is_skew(&self) -> bool {
        (0..self.n).all(|v| (0..self.n).all(|w| self.get(v, w) == -self.get(w, v)))
    }

    /// Matrix mutation at `k`.
    pub fn mutate(&self, k: usize) -> ExchangeMatrix {
        let mut out = self.clone();
        for v in 0..self.n {
            for w in 0..self.n {
                let x = if v == k || w == k {
                    -self.get(v, w)
                } else {
                    let (a, b) = (self.get(v, k), self.get(k, w));
                    self.get(v, w) + (a.abs() * b + a * b.abs()) / 2
                };
                out.set(v, w, x);
            }
        }
        out
    }

    /// Arrows `(v, w, multiplicity)` with positive multiplicity.
    pub fn arrows(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for v in 0..self.n {
            for w in 0..self.n {
                if self.get(v, w) > 0 {
                    out.push((v, w, self.get(v, w)));
                }
            }
        }
        out
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).map(|c| c.to_vec()).collect()
    }
}
