//! Canonical JSON term lists, LaTeX / plain-text rendering and a parser for
//! both notations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::cartan::HeightFunction;
use crate::characters::CharacterResult;
use crate::error::{Error, Result};
use crate::qcluster::{Basis, QuantumSeed};
use crate::qtorus::{Monomial, QTPoly, TCoeff, Var};

fn var_basis(v: Var) -> Basis {
    match v {
        Var::Y(..) => Basis::Y,
        Var::U(..) => Basis::U,
        Var::Z(..) | Var::F(..) => Basis::Z,
    }
}

/// Basis of a polynomial, `None` when constant or mixed.
pub fn infer_basis(p: &QTPoly) -> Option<Basis> {
    let mut out = None;
    for v in p.vars() {
        let b = var_basis(v);
        match out {
            None => out = Some(b),
            Some(o) if o != b => return None,
            _ => {}
        }
    }
    out
}

/// `{"basis":..,"terms":[{"t_half":e,"coeff":"c","mono":[[i,r,e],..]}]}`, leading term first.
pub fn poly_to_json(basis: Basis, p: &QTPoly) -> Result<Value> {
    let mut terms = Vec::new();
    for (m, c) in p.terms().rev() {
        let mut mono = Vec::new();
        for &(v, e) in m.entries() {
            if var_basis(v) != basis {
                return Err(Error::BasisMismatch(format!("{v} in a {basis}-polynomial")));
            }
            mono.push(match v {
                Var::F(j) => json!(["f", j, e]),
                v => json!([v.node(), v.r().unwrap(), e]),
            });
        }
        for (e, k) in c.terms() {
            terms.push(json!({"t_half": e, "coeff": k.to_string(), "mono": mono}));
        }
    }
    Ok(json!({"basis": basis.as_str(), "terms": terms}))
}

pub fn poly_from_json(v: &Value) -> Result<(Basis, QTPoly)> {
    let bad = |s: &str| Error::Parse(format!("polynomial JSON: {s}"));
    let basis: Basis = v
        .get("basis")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing basis"))?
        .parse()
        .map_err(|_| bad("unknown basis"))?;
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))?;
    let mut p = QTPoly::zero();
    for t in terms {
        let e = t.get("t_half").and_then(Value::as_i64).ok_or_else(|| bad("t_half"))?;
        let c: BigInt = t
            .get("coeff")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("coeff"))?
            .parse()
            .map_err(|_| bad("coeff is not an integer"))?;
        let mono = t.get("mono").and_then(Value::as_array).ok_or_else(|| bad("mono"))?;
        let mut entries = Vec::new();
        for x in mono {
            let a = x.as_array().ok_or_else(|| bad("mono entry"))?;
            if a.len() != 3 {
                return Err(bad("mono entry must have 3 fields"));
            }
            let exp = a[2].as_i64().ok_or_else(|| bad("exponent"))? as i32;
            let var = if a[0].as_str() == Some("f") {
                if basis != Basis::Z {
                    return Err(bad("f only occurs in the z basis"));
                }
                Var::F(a[1].as_u64().ok_or_else(|| bad("node"))? as usize)
            } else {
                let i = a[0].as_u64().ok_or_else(|| bad("node"))? as usize;
                let r = a[1].as_i64().ok_or_else(|| bad("r"))? as i32;
                match basis {
                    Basis::Y => Var::Y(i, r),
                    Basis::U => Var::U(i, r),
                    Basis::Z => Var::Z(i, r),
                }
            };
            entries.push((var, exp));
        }
        let i32e = i32::try_from(e).map_err(|_| bad("t_half out of range"))?;
        p.add_term(Monomial::from_entries(entries), &TCoeff::monomial(i32e, c));
    }
    Ok((basis, p))
}

/// LaTeX form, leading term first: `(t+t^{-1}) Y_{2,-4} Y_{2,-2}^{-1} + ...`.
pub fn poly_to_latex(p: &QTPoly) -> String {
    p.to_latex()
}

/// Plain-text form: `(t+t^-1)*Y[2,-4]*Y[2,-2]^-1 + ...`.
pub fn poly_to_text(p: &QTPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let mut factors = Vec::new();
        let single = c.terms().len() == 1;
        let mut negative = false;
        if single {
            let (e, v) = &c.terms()[0];
            negative = v.is_negative();
            let abs = v.abs();
            if !abs.is_one() {
                factors.push(abs.to_string());
            }
            if *e != 0 {
                factors.push(text_t_power(*e));
            }
        } else {
            factors.push(format!("({})", text_tcoeff(c)));
        }
        for &(v, e) in m.entries() {
            let base = match v {
                Var::F(j) => format!("f[{j}]"),
                v => format!("{}[{},{}]", v.symbol(), v.node(), v.r().unwrap()),
            };
            factors.push(if e == 1 { base } else { format!("{base}^{e}") });
        }
        if factors.is_empty() {
            factors.push("1".into());
        }
        if k > 0 {
            out.push_str(if negative { " - " } else { " + " });
        } else if negative {
            out.push('-');
        }
        out.push_str(&factors.join("*"));
    }
    out
}

fn text_t_power(e: i32) -> String {
    match e {
        2 => "t".into(),
        e if e % 2 == 0 => format!("t^{}", e / 2),
        e => format!("t^({e}/2)"),
    }
}

fn text_tcoeff(c: &TCoeff) -> String {
    let mut s = String::new();
    for (k, (e, v)) in c.terms().iter().rev().enumerate() {
        if k > 0 {
            s.push(if v.is_negative() { '-' } else { '+' });
        } else if v.is_negative() {
            s.push('-');
        }
        let abs = v.abs();
        match (*e, abs.is_one()) {
            (0, _) => s.push_str(&abs.to_string()),
            (_, true) => s.push_str(&text_t_power(*e)),
            (_, false) => s.push_str(&format!("{abs}*{}", text_t_power(*e))),
        }
    }
    s
}

/// Removes LaTeX decorations: `\left( \right)`, `\left. \right.`, `{\color{..} ..}`,
/// alignment marks and spacing commands.
fn preprocess(s: &str) -> String {
    let mut s = s.to_string();
    while let Some(pos) = s.find("\\color{") {
        // drop the command and its argument; drop the group brace that opened it
        let after = pos + "\\color{".len();
        let close = s[after..].find('}').map(|k| after + k + 1).unwrap_or(s.len());
        let opener = s[..pos].trim_end().rfind('{');
        let mut t = String::new();
        match opener {
            Some(o) if s[o + 1..pos].trim().is_empty() => {
                let body_end = matching_brace(&s, o).unwrap_or(s.len());
                t.push_str(&s[..o]);
                t.push('(');
                t.push_str(&s[close..body_end]);
                t.push(')');
                if body_end < s.len() {
                    t.push_str(&s[body_end + 1..]);
                }
            }
            _ => {
                t.push_str(&s[..pos]);
                t.push_str(&s[close..]);
            }
        }
        s = t;
    }
    for (from, to) in [
        ("\\left(", "("),
        ("\\right)", ")"),
        ("\\left.", ""),
        ("\\right.", ""),
        ("\\\\", ""),
        ("\\quad", ""),
        ("\\cdot", ""),
        ("\\,", ""),
        ("&", ""),
    ] {
        s = s.replace(from, to);
    }
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn matching_brace(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0;
    for (k, ch) in s[open..].char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + k);
                }
            }
            _ => {}
        }
    }
    None
}

/// Parses a polynomial in LaTeX (`z_{2,-2}\left(z_{2,0}\right)^{-1}f_1`) or plain-text
/// (`z[2,-2]*z[2,0]^-1*f[1]`) notation. With `xi`, `z_{j,-xi_j+2}` is read as `f_j`.
pub fn parse_poly(s: &str, xi: Option<&HeightFunction>) -> Result<QTPoly> {
    let chars: Vec<char> = preprocess(s).chars().collect();
    let mut p = Parser { s: &chars, pos: 0, xi };
    let out = p.poly()?;
    if p.pos != chars.len() {
        return Err(Error::Parse(format!("unexpected `{}` at {}", chars[p.pos..].iter().collect::<String>(), p.pos)));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [char],
    pos: usize,
    xi: Option<&'a HeightFunction>,
}

type CPoly = BTreeMap<Monomial, TCoeff>;

fn cmul(a: &CPoly, b: &CPoly) -> CPoly {
    let mut out: CPoly = BTreeMap::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            out.entry(m1.mul(m2)).or_default().add_assign(&c1.mul(c2));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn cconst(c: TCoeff) -> CPoly {
    let mut out = BTreeMap::new();
    out.insert(Monomial::one(), c);
    out
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}` at {}", self.pos)))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some('-') || self.peek() == Some('+') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let t: String = self.s[start..self.pos].iter().collect();
        t.parse().map_err(|_| Error::Parse(format!("expected an integer at {start}")))
    }

    fn poly(&mut self) -> Result<QTPoly> {
        let mut acc: CPoly = BTreeMap::new();
        let mut sign = 1;
        if self.eat('-') {
            sign = -1;
        } else {
            self.eat('+');
        }
        loop {
            let t = self.term()?;
            for (m, c) in t {
                let c = if sign < 0 { c.neg() } else { c };
                acc.entry(m).or_default().add_assign(&c);
            }
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                break;
            }
        }
        Ok(QTPoly::from_terms(acc))
    }

    fn term(&mut self) -> Result<CPoly> {
        let mut acc = cconst(TCoeff::one());
        let mut any = false;
        loop {
            self.eat('*');
            match self.peek() {
                Some(c) if c.is_ascii_digit() || c == '(' || c == 't' || "Yzuf".contains(c) => {
                    let f = self.factor()?;
                    acc = cmul(&acc, &f);
                    any = true;
                }
                _ => break,
            }
        }
        if !any {
            return Err(Error::Parse(format!("expected a term at {}", self.pos)));
        }
        Ok(acc)
    }

    /// `^{e}`, `^e`, `^{e/2}`, `^(e/2)` in units of the base; returns twice the exponent
    /// when `half` is allowed.
    fn exponent(&mut self, half: bool) -> Result<i64> {
        if !self.eat('^') {
            return Ok(if half { 2 } else { 1 });
        }
        let close = if self.eat('{') {
            Some('}')
        } else if self.eat('(') {
            Some(')')
        } else {
            None
        };
        let e = self.int()?;
        let out = if self.eat('/') {
            let d = self.int()?;
            if !half || d != 2 {
                return Err(Error::Parse("fractional exponent".into()));
            }
            e
        } else if half {
            2 * e
        } else {
            e
        };
        if let Some(c) = close {
            self.expect(c)?;
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<CPoly> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                Ok(cconst(TCoeff::from_int(v)))
            }
            Some('t') => {
                self.pos += 1;
                let e = self.exponent(true)?;
                Ok(cconst(TCoeff::monomial(e as i32, BigInt::one())))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.poly()?;
                self.expect(')')?;
                let e = self.exponent(false)?;
                let inner: CPoly = inner.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
                self.power(inner, e)
            }
            _ => {
                let v = self.var()?;
                let e = self.exponent(false)?;
                let mut out = BTreeMap::new();
                out.insert(Monomial::pow_var(v, e as i32), TCoeff::one());
                Ok(out)
            }
        }
    }

    fn power(&self, p: CPoly, e: i64) -> Result<CPoly> {
        if e >= 0 {
            let mut out = cconst(TCoeff::one());
            for _ in 0..e {
                out = cmul(&out, &p);
            }
            return Ok(out);
        }
        match p.iter().next() {
            Some((m, c)) if p.len() == 1 && c.terms().len() == 1 && c.terms()[0].1.abs().is_one() => {
                let (te, tc) = &c.terms()[0];
                let k = (-e) as i32;
                let sign = if tc.is_negative() && k % 2 == 1 { -1 } else { 1 };
                let mut out = BTreeMap::new();
                out.insert(m.pow(-k), TCoeff::monomial(-te * k, BigInt::from(sign)));
                Ok(out)
            }
            _ => Err(Error::Parse("negative power of a non-monomial".into())),
        }
    }

    fn var(&mut self) -> Result<Var> {
        let c = self.peek().ok_or_else(|| Error::Parse("unexpected end".into()))?;
        self.pos += 1;
        let (open, close) = if self.eat('_') {
            if self.eat('{') {
                ('{', '}')
            } else {
                // f_1 shorthand: single digit
                let d = self.peek().filter(|d| d.is_ascii_digit()).ok_or_else(|| Error::Parse("index".into()))?;
                self.pos += 1;
                if c != 'f' {
                    return Err(Error::Parse(format!("{c} needs two indices")));
                }
                return Ok(Var::F(d.to_digit(10).unwrap() as usize));
            }
        } else if self.eat('[') {
            ('[', ']')
        } else {
            return Err(Error::Parse(format!("expected an index after `{c}` at {}", self.pos)));
        };
        let _ = open;
        let i = self.int()?;
        if i <= 0 {
            return Err(Error::Parse("node indices start at 1".into()));
        }
        let i = i as usize;
        let v = if c == 'f' {
            Var::F(i)
        } else {
            self.expect(',')?;
            let r = self.int()? as i32;
            match c {
                'Y' => Var::Y(i, r),
                'u' => Var::U(i, r),
                _ => match self.xi {
                    Some(xi) if i <= xi.values().len() && r == 2 - xi.xi(i) as i32 => Var::F(i),
                    _ => Var::Z(i, r),
                },
            }
        };
        self.expect(close)?;
        Ok(v)
    }
}

fn vertex_json(node: usize, r: i32) -> Value {
    json!([node, r])
}

/// Seed snapshot: window, frozen flags, `B`, `L`, arrows, variables and mutation history.
pub fn seed_to_json(seed: &QuantumSeed) -> Result<Value> {
    let w = seed.window();
    let vertices: Vec<Value> = w
        .vertices()
        .iter()
        .enumerate()
        .map(|(k, v)| json!({"node": v.node, "r": v.r, "frozen": w.frozen_kind(k)}))
        .collect();
    let b = seed.exchange_matrix();
    let arrows: Vec<Value> = b
        .arrows()
        .into_iter()
        .map(|(p, q, m)| {
            let (a, c) = (w.vertices()[p], w.vertices()[q]);
            json!({"from": vertex_json(a.node, a.r), "to": vertex_json(c.node, c.r), "multiplicity": m})
        })
        .collect();
    let mut vars = Vec::new();
    for (v, p) in w.vertices().iter().zip(seed.vars()) {
        vars.push(json!({"vertex": vertex_json(v.node, v.r), "poly": poly_to_json(seed.basis(), p)?}));
    }
    let history: Vec<Value> = seed
        .history()
        .iter()
        .map(|h| json!({"vertex": vertex_json(h.vertex.node, h.vertex.r), "alpha_half": h.alpha_half, "beta_half": h.beta_half}))
        .collect();
    Ok(json!({
        "type": w.lie().to_string(),
        "xi": w.xi().values(),
        "sign": seed.torus().sign(),
        "basis": seed.basis().as_str(),
        "variant": w.variant(),
        "r_floor": w.r_floor(),
        "vertices": vertices,
        "B": b.rows(),
        "L": seed.l_rows(),
        "arrows": arrows,
        "variables": vars,
        "history": history,
    }))
}

pub fn character_to_json(c: &CharacterResult) -> Result<Value> {
    Ok(json!({
        "module": {"node": c.node, "k": c.k, "r": c.r},
        "truncated": c.truncated,
        "window": {"r_floor": c.r_floor, "passes": c.passes, "steps": c.steps, "horizon": c.horizon},
        "monomials": c.poly.len(),
        "sum_at_t1": c.poly.eval_coefficients_at_one().to_string(),
        "poly": poly_to_json(c.basis, &c.poly)?,
    }))
}
