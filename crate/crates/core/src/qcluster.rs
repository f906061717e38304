//! Quantum seeds, quantum mutation and the mutation sequences `𝒮` and `S_i`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, HeightFunction, LieType, Node, SignConvention};
use crate::error::{Error, Result};
use crate::qtorus::{Monomial, QTPoly, QuantumTorus, Var};
use crate::quiver::{ExchangeMatrix, Frozen, Vertex, VertexWindow, WindowVariant};

/// Type, height function and sign convention of a computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub lie: LieType,
    pub xi: HeightFunction,
    pub sign: SignConvention,
}

impl Config {
    pub fn new(lie: LieType, xi: HeightFunction, sign: SignConvention) -> Result<Self> {
        let xi = HeightFunction::new(lie, xi.values().to_vec())?;
        Ok(Config { lie, xi, sign })
    }

    /// Default height function (`xi_1 = 0`) and sign convention.
    pub fn default_for(lie: LieType) -> Self {
        Config { lie, xi: HeightFunction::default_for(lie, 0), sign: SignConvention::default() }
    }

    /// A torus whose series horizon covers spectral spans up to `span`.
    pub fn torus_for_span(&self, span: usize) -> Result<Arc<QuantumTorus>> {
        let horizon = CartanData::horizon_for(self.lie, span);
        Ok(Arc::new(QuantumTorus::new(self.lie, self.xi.clone(), self.sign, horizon)?))
    }

    /// Initial seed on a window; the horizon is sized to the window.
    pub fn seed(&self, variant: WindowVariant, r_floor: i32, basis: Basis) -> Result<QuantumSeed> {
        let top = match variant {
            WindowVariant::GammaWindow { r_ceil } => r_ceil,
            _ => 2,
        };
        let torus = self.torus_for_span((top - r_floor).max(0) as usize)?;
        let window = VertexWindow::new(self.lie, self.xi.clone(), variant, r_floor)?;
        QuantumSeed::initial(torus, window, basis)
    }
}

/// Which torus the cluster variables are written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Y,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "z")]
    Z,
}

impl Basis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Basis::Y => "Y",
            Basis::U => "u",
            Basis::Z => "z",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Y" | "y" => Ok(Basis::Y),
            "u" | "U" => Ok(Basis::U),
            "z" | "Z" => Ok(Basis::Z),
            _ => Err(Error::InvalidArgument(format!("unknown basis `{s}`"))),
        }
    }
}

/// Exchange data of one performed mutation: `X'_k * X_k = t^{alpha} M_in + t^{beta} M_out`,
/// exponents in units of `t^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MutationRecord {
    pub vertex: Vertex,
    pub alpha_half: i64,
    pub beta_half: i64,
}

/// A quantum seed: window, exchange matrix `B`, skew form `L` and cluster variables.
#[derive(Clone, Debug)]
pub struct QuantumSeed {
    torus: Arc<QuantumTorus>,
    window: Arc<VertexWindow>,
    basis: Basis,
    b: ExchangeMatrix,
    l: Vec<i64>,
    vars: Vec<QTPoly>,
    compat: i64,
    history: Vec<MutationRecord>,
}

impl QuantumSeed {
    /// Initial seed with variables `prod_k Y_{i,r+2k}` (basis Y), `u_{i,r}` (basis u)
    /// or `z_{i,r}` / `f_i` (basis z).
    pub fn initial(torus: Arc<QuantumTorus>, window: VertexWindow, basis: Basis) -> Result<Self> {
        if window.lie() != torus.lie() || window.xi() != torus.xi() {
            return Err(Error::InvalidArgument("window and torus disagree on type or height".into()));
        }
        if basis != Basis::Z && window.variant() != WindowVariant::Gminus {
            return Err(Error::InvalidArgument(format!("basis {basis} needs a G^- window")));
        }
        let vars: Vec<QTPoly> =
            window.vertices().iter().map(|&v| QTPoly::from_monomial(initial_monomial(&torus, basis, v))).collect();
        let b = window.exchange_matrix();
        let n = window.len();
        let mut l = vec![0i64; n * n];
        for p in 0..n {
            for q in 0..n {
                l[p * n + q] = torus.pairing_d(vars[p].lead_monomial().unwrap(), vars[q].lead_monomial().unwrap())?;
            }
        }
        let mut seed =
            QuantumSeed { torus, window: Arc::new(window), basis, b, l, vars, compat: 0, history: Vec::new() };
        seed.compat = seed.compatibility_diagonal()?;
        Ok(seed)
    }

    pub fn torus(&self) -> &Arc<QuantumTorus> {
        &self.torus
    }

    pub fn window(&self) -> &VertexWindow {
        &self.window
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn exchange_matrix(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn l(&self, p: usize, q: usize) -> i64 {
        self.l[p * self.window.len() + q]
    }

    pub fn l_rows(&self) -> Vec<Vec<i64>> {
        let n = self.window.len();
        self.l.chunks(n).map(|c| c.to_vec()).collect()
    }

    pub fn vars(&self) -> &[QTPoly] {
        &self.vars
    }

    pub fn var(&self, v: Vertex) -> Result<&QTPoly> {
        Ok(&self.vars[self.window.index_of(v)?])
    }

    pub fn history(&self) -> &[MutationRecord] {
        &self.history
    }

    /// Diagonal value `d` of `(B^T L)(v,w) = d δ_vw` over mutable `v`.
    pub fn compatibility_diagonal(&self) -> Result<i64> {
        let n = self.window.len();
        let mut diag: Option<i64> = None;
        for v in self.window.mutable_indices() {
            for w in 0..n {
                let s: i64 = (0..n).map(|x| self.b.get(x, v) * self.l(x, w)).sum();
                if v == w {
                    match diag {
                        None => diag = Some(s),
                        Some(d) if d != s => {
                            return Err(Error::Invariant(format!(
                                "(B^T L) diagonal {s} at {} differs from {d}",
                                self.window.vertices()[v]
                            )))
                        }
                        _ => {}
                    }
                } else if s != 0 {
                    return Err(Error::Invariant(format!(
                        "(B^T L)({}, {}) = {s}",
                        self.window.vertices()[v],
                        self.window.vertices()[w]
                    )));
                }
            }
        }
        match diag {
            Some(0) => Err(Error::Invariant("(B^T L) vanishes on the diagonal".into())),
            Some(d) => Ok(d),
            None => Ok(0),
        }
    }

    /// Bar-invariant product `X^c` for a non-negative exponent vector.
    pub fn cluster_monomial(&self, c: &[i64]) -> Result<QTPoly> {
        let mut out = QTPoly::one();
        for (k, &e) in c.iter().enumerate() {
            if e < 0 {
                return Err(Error::InvalidArgument("negative exponent in cluster monomial".into()));
            }
            if e > 0 {
                let p = self.torus.pow(&self.vars[k], e as u32)?;
                out = self.torus.normalized_product(&out, &p)?;
            }
        }
        Ok(out)
    }

    /// Toric-frame element `M(c)` for `c` with at most one negative entry.
    pub fn toric_frame_monomial(&self, c: &[i64]) -> Result<QTPoly> {
        let negatives: Vec<usize> = (0..c.len()).filter(|&k| c[k] < 0).collect();
        if negatives.len() > 1 {
            return Err(Error::InvalidArgument("more than one negative exponent".into()));
        }
        let pos: Vec<i64> = c.iter().map(|&e| e.max(0)).collect();
        let mut p = self.cluster_monomial(&pos)?;
        if let Some(&k) = negatives.first() {
            let q = self.torus.pow(&self.vars[k], (-c[k]) as u32)?;
            p = self.torus.divide_exact_right(&p, &q)?;
        }
        self.torus.bar_normalize(&p)
    }

    /// Quantum mutation at a mutable vertex.
    pub fn mutate(&self, v: Vertex) -> Result<QuantumSeed> {
        let k = self.window.index_of(v)?;
        if self.window.is_frozen(k) {
            return Err(Error::FrozenVertex(v));
        }
        let n = self.window.len();
        let c_in: Vec<i64> = (0..n).map(|x| self.b.get(x, k).max(0)).collect();
        let c_out: Vec<i64> = (0..n).map(|x| (-self.b.get(x, k)).max(0)).collect();
        let m_in = self.cluster_monomial(&c_in)?;
        let m_out = self.cluster_monomial(&c_out)?;
        let xk = &self.vars[k];
        let lead_k = xk.lead_monomial().unwrap();
        let alpha = self.torus.pairing_d(m_in.lead_monomial().unwrap(), lead_k)?;
        let beta = self.torus.pairing_d(m_out.lead_monomial().unwrap(), lead_k)?;
        let num = &m_in.shift_t(alpha as i32) + &m_out.shift_t(beta as i32);
        let new = self.torus.divide_exact_right(&num, xk)?;
        if !new.is_bar_invariant() {
            return Err(Error::NotBarInvariant(format!("mutated variable at {v}")));
        }
        if xk.as_monomial().is_some() {
            let mut cp = c_in.clone();
            cp[k] = -1;
            let mut cm = c_out.clone();
            cm[k] = -1;
            let alt = &self.toric_frame_monomial(&cp)? + &self.toric_frame_monomial(&cm)?;
            if alt != new {
                return Err(Error::Invariant(format!("toric-frame form disagrees at {v}")));
            }
        }
        let mut out = self.clone();
        out.b = self.b.mutate(k);
        let lead_new = new.lead_monomial().unwrap().clone();
        for w in 0..n {
            if w == k {
                continue;
            }
            let x = self.torus.pairing_d(&lead_new, self.vars[w].lead_monomial().unwrap())?;
            out.l[k * n + w] = x;
            out.l[w * n + k] = -x;
        }
        out.vars[k] = new;
        out.history.push(MutationRecord { vertex: v, alpha_half: alpha, beta_half: beta });
        let d = out.compatibility_diagonal()?;
        if d != self.compat {
            return Err(Error::Invariant(format!("compatibility constant changed from {} to {d}", self.compat)));
        }
        Ok(out)
    }

    pub fn apply_sequence(&self, seq: &[Vertex]) -> Result<QuantumSeed> {
        let mut s = self.clone();
        for &v in seq {
            s = s.mutate(v)?;
        }
        Ok(s)
    }

    /// Like [`Self::apply_sequence`] but keeps the seed after every step.
    pub fn apply_sequence_traced(&self, seq: &[Vertex]) -> Result<Vec<QuantumSeed>> {
        let mut out = Vec::with_capacity(seq.len());
        let mut s = self.clone();
        for &v in seq {
            s = s.mutate(v)?;
            out.push(s.clone());
        }
        Ok(out)
    }

    /// Exhaustive check that `X_v * X_w = t^{L(v,w)} X_w * X_v` for all pairs.
    pub fn check_quasi_commutation(&self) -> Result<()> {
        let n = self.window.len();
        for p in 0..n {
            for q in p + 1..n {
                match self.torus.commutation_exponent(&self.vars[p], &self.vars[q])? {
                    Some(lambda) if lambda == 2 * self.l(p, q) => {}
                    other => {
                        return Err(Error::Invariant(format!(
                            "X{} and X{} do not quasi-commute with exponent L = {} ({other:?})",
                            self.window.vertices()[p],
                            self.window.vertices()[q],
                            self.l(p, q)
                        )))
                    }
                }
            }
        }
        Ok(())
    }
}

fn initial_monomial(torus: &QuantumTorus, basis: Basis, v: Vertex) -> Monomial {
    match basis {
        Basis::Y => {
            let mut r = v.r;
            let mut e = Vec::new();
            while r <= 0 {
                e.push((Var::Y(v.node, r), 1));
                r += 2;
            }
            Monomial::from_entries(e)
        }
        Basis::U => Monomial::var(Var::U(v.node, v.r)),
        Basis::Z => Monomial::var(torus.z(v.node, v.r)),
    }
}

/// `initial_seed(type, xi, variant, r_floor)`: Y-basis on `G^-`, z-basis on `Γ` windows.
pub fn initial_seed(torus: Arc<QuantumTorus>, variant: WindowVariant, r_floor: i32) -> Result<QuantumSeed> {
    let window = VertexWindow::new(torus.lie(), torus.xi().clone(), variant, r_floor)?;
    let basis = if variant == WindowVariant::Gminus { Basis::Y } else { Basis::Z };
    QuantumSeed::initial(torus, window, basis)
}

/// A finite list of mutations with a label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutationSequence {
    pub label: String,
    pub steps: Vec<Vertex>,
}

impl MutationSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Deepest window floor that still leaves every step mutable: `min r - 2`.
    pub fn required_floor(&self) -> Option<i32> {
        self.steps.iter().map(|v| v.r).min().map(|r| r - 2)
    }
}

fn check_column_order(lie: LieType, xi: &HeightFunction, order: &[Node]) -> Result<()> {
    let mut seen: Vec<Node> = order.to_vec();
    seen.sort_unstable();
    if seen != lie.nodes().collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!("{order:?} is not a column order for {lie}")));
    }
    if order.windows(2).any(|w| xi.xi(w[0]) > xi.xi(w[1])) {
        return Err(Error::InvalidArgument("columns with xi = 0 must come first".into()));
    }
    Ok(())
}

/// `repetitions` passes of `𝒮` restricted to the mutable vertices of `window`.
pub fn sequence_s(
    lie: LieType,
    xi: &HeightFunction,
    column_order: Option<&[Node]>,
    repetitions: usize,
    window: &VertexWindow,
) -> Result<MutationSequence> {
    let order = match column_order {
        Some(o) => {
            check_column_order(lie, xi, o)?;
            o.to_vec()
        }
        None => xi.column_order(None),
    };
    let mut pass = Vec::new();
    for &i in &order {
        let mut col: Vec<Vertex> = window
            .vertices()
            .iter()
            .enumerate()
            .filter(|&(k, v)| v.node == i && window.frozen_kind(k) == Frozen::No)
            .map(|(_, &v)| v)
            .collect();
        col.sort_by_key(|v| std::cmp::Reverse(v.r));
        pass.extend(col);
    }
    let steps = (0..repetitions).flat_map(|_| pass.iter().copied()).collect();
    Ok(MutationSequence { label: format!("S^{repetitions}"), steps })
}

/// Shortest prefix-closed part of `𝒮^m` needed for the value at each target after `m` passes.
///
/// Pass `p` at `(i,r)` reads `(i,r+2)` at pass `p`, `(i,r-2)` and itself at pass `p-1`,
/// and its neighbours `(j, r - eps_i)` at pass `p - 1 + xi_i`.
pub fn dependency_schedule(
    lie: LieType,
    xi: &HeightFunction,
    targets: &[(Vertex, usize)],
    first_column: Option<Node>,
) -> Result<MutationSequence> {
    let mut need: HashSet<(usize, Vertex)> = HashSet::new();
    let mut stack: Vec<(usize, Vertex)> = Vec::new();
    for &(v, m) in targets {
        lie.check_node(v.node)?;
        if !xi.in_i_hat(v.node, v.r) || v.r > xi.top(v.node) {
            return Err(Error::BadIndex(v.node, v.r));
        }
        if m > 0 {
            stack.push((m, v));
        }
    }
    while let Some((p, v)) = stack.pop() {
        if !need.insert((p, v)) {
            continue;
        }
        let i = v.node;
        let mut push = |p: usize, w: Vertex| {
            if p >= 1 && w.r <= xi.top(w.node) {
                stack.push((p, w));
            }
        };
        push(p - 1, v);
        push(p, Vertex::new(i, v.r + 2));
        push(p - 1, Vertex::new(i, v.r - 2));
        for j in lie.neighbors(i) {
            push(p - 1 + xi.xi(i) as usize, Vertex::new(j, v.r - xi.epsilon(i)));
        }
    }
    let max_pass = need.iter().map(|x| x.0).max().unwrap_or(0);
    let order = xi.column_order(first_column);
    let mut steps = Vec::new();
    for p in 1..=max_pass {
        for &i in &order {
            let mut col: Vec<Vertex> = need.iter().filter(|x| x.0 == p && x.1.node == i).map(|x| x.1).collect();
            col.sort_by_key(|v| std::cmp::Reverse(v.r));
            steps.extend(col);
        }
    }
    Ok(MutationSequence { label: "schedule".into(), steps })
}

/// `S_i`: the part of `𝒮^{h'}` (column `i` read first) that computes the variable at `(i, -xi_i)`.
pub fn sequence_si(lie: LieType, xi: &HeightFunction, i: Node) -> Result<MutationSequence> {
    lie.check_node(i)?;
    let mut seq = dependency_schedule(lie, xi, &[(Vertex::new(i, xi.top(i)), lie.half_coxeter())], Some(i))?;
    seq.label = format!("S_{i}");
    Ok(seq)
}
