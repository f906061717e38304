//! One-shot subcommands.

use std::io::Write;

use qtchar_core::characters::{kr_full, kr_truncated, tsystem_check, TSystemReport};
use qtchar_core::format::{character_to_json, poly_to_json, poly_to_latex, poly_to_text, seed_to_json};
use qtchar_core::oplus::{j_map, trace_sequence, TraceStep};
use qtchar_core::{sequence_si, Basis, CartanData, Config, Node, SignConvention, WindowVariant};
use serde_json::{json, Value};

use crate::{resolve_xi, CartanArgs, CharsArgs, CliError, CliResult, Format, TraceArgs, TsystemArgs};

fn write_json(out: &mut dyn Write, v: &Value) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| CliError::Failed(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn parse_basis(s: &str) -> CliResult<Basis> {
    s.parse().map_err(|e: qtchar_core::Error| CliError::Usage(e.to_string()))
}

/// A `t^{1/2}` exponent written in units of `t`.
pub fn half_units(h: i64) -> String {
    if h % 2 == 0 {
        (h / 2).to_string()
    } else {
        format!("{h}/2")
    }
}

pub fn chars(a: &CharsArgs, sign: SignConvention, out: &mut dyn Write) -> CliResult<()> {
    let xi = resolve_xi(a.ty.lie, a.ty.xi.as_deref(), a.node, a.r)?;
    let cfg = Config::new(a.ty.lie, xi, sign)?;
    if a.kr == 0 {
        return Err(CliError::Usage("--kr must be positive".into()));
    }
    let top = cfg.xi.top(a.node);
    let k = a.kr as i32;
    let mut res = if a.truncated {
        kr_truncated(&cfg, a.node, a.kr, a.r.unwrap_or(top - 2 * k + 2), a.depth)?
    } else {
        kr_full(&cfg, a.node, a.kr, a.r.unwrap_or(top - 2 * k + 2 - 2 * cfg.lie.half_coxeter() as i32), a.depth)?
    };
    if parse_basis(&a.basis)? == Basis::Z {
        let torus = cfg.torus_for_span(0)?;
        res.poly = j_map(&torus, &res.poly)?;
        res.basis = Basis::Z;
    }
    match a.format {
        Format::Text => writeln!(out, "{}", poly_to_text(&res.poly))?,
        Format::Latex => writeln!(out, "{}", poly_to_latex(&res.poly))?,
        Format::Json => {
            let mut v = character_to_json(&res)?;
            v["type"] = json!(cfg.lie.to_string());
            v["xi"] = json!(cfg.xi.values());
            v["sign"] = json!(cfg.sign);
            write_json(out, &v)?;
        }
    }
    Ok(())
}

fn report_json(r: &TSystemReport) -> Value {
    json!({
        "node": r.node,
        "k": r.k,
        "r": r.r,
        "truncated": r.truncated,
        "holds": r.holds,
        "exponents_match": r.exponents_match(),
        "alpha_half": r.alpha_half,
        "gamma_half": r.gamma_half,
        "expected_alpha_half": r.expected_alpha_half,
        "expected_gamma_half": r.expected_gamma_half,
    })
}

pub fn tsystem(a: &TsystemArgs, sign: SignConvention, out: &mut dyn Write) -> CliResult<()> {
    let xi = resolve_xi(a.ty.lie, a.ty.xi.as_deref(), a.node, a.r)?;
    let cfg = Config::new(a.ty.lie, xi, sign)?;
    let r = a.r.unwrap_or(cfg.xi.top(a.node) - 2 * a.k as i32 - 2);
    let rep = tsystem_check(&cfg, a.node, a.k, r, a.full, a.depth)?;
    let show = |h: Option<i64>| h.map(half_units).unwrap_or_else(|| "none".into());
    match a.format {
        Format::Json => {
            let mut v = report_json(&rep);
            v["type"] = json!(cfg.lie.to_string());
            v["xi"] = json!(cfg.xi.values());
            v["sign"] = json!(cfg.sign);
            write_json(out, &v)?;
        }
        _ => {
            writeln!(
                out,
                "{} W^({})_{{{},{}}} {}: {}",
                cfg.lie,
                rep.node,
                rep.k,
                rep.r,
                if rep.truncated { "truncated" } else { "full" },
                if rep.holds { "holds" } else { "fails" }
            )?;
            writeln!(out, "alpha = {} (expected {})", show(rep.alpha_half), half_units(rep.expected_alpha_half))?;
            writeln!(out, "gamma = {} (expected {})", show(rep.gamma_half), half_units(rep.expected_gamma_half))?;
        }
    }
    if rep.holds && rep.exponents_match() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("T-system check failed for node {} k={} r={}", rep.node, rep.k, rep.r)))
    }
}

fn parse_sequence_name(s: &str) -> CliResult<Node> {
    s.strip_prefix('S')
        .or_else(|| s.strip_prefix('s'))
        .and_then(|n| n.trim_start_matches('_').parse().ok())
        .ok_or_else(|| CliError::Usage(format!("unknown sequence `{s}`; expected S<i>")))
}

fn vertex_json(v: qtchar_core::Vertex) -> Value {
    json!([v.node, v.r])
}

/// Runs `S_i` and returns the trace, on the window the sequence needs unless `depth` is given.
pub fn run_trace(cfg: &Config, i: Node, basis: Basis, depth: Option<i32>) -> CliResult<qtchar_core::oplus::Trace> {
    let seq = sequence_si(cfg.lie, &cfg.xi, i)?;
    let needed = seq.required_floor().unwrap_or(cfg.xi.top(i) - 2);
    let floor = match depth {
        Some(d) if d > needed => {
            return Err(qtchar_core::Error::WindowTooShallow { required: needed, actual: d }.into())
        }
        Some(d) => d,
        None => needed,
    };
    let variant = if basis == Basis::Z { WindowVariant::GammaMinus } else { WindowVariant::Gminus };
    let initial = cfg.seed(variant, floor, basis)?;
    Ok(trace_sequence(&initial, seq)?)
}

fn step_json(basis: Basis, s: &TraceStep) -> CliResult<Value> {
    let seed = seed_to_json(&s.seed)?;
    let mut v = json!({
        "step": s.step,
        "vertex": vertex_json(s.vertex),
        "pass": s.pass,
        "poly": poly_to_json(basis, &s.poly)?,
        "quiver": {"arrows": seed["arrows"].clone()},
    });
    if let (Some(d), Some(y)) = (&s.degree, &s.y_form) {
        v["degree"] = json!(d.to_string());
        v["y_form"] = poly_to_json(Basis::Y, y)?;
    }
    Ok(v)
}

pub fn trace(a: &TraceArgs, sign: SignConvention, out: &mut dyn Write) -> CliResult<()> {
    let i = parse_sequence_name(&a.sequence)?;
    let basis = parse_basis(&a.basis)?;
    let xi = resolve_xi(a.ty.lie, a.ty.xi.as_deref(), i, None)?;
    let cfg = Config::new(a.ty.lie, xi, sign)?;
    let t = run_trace(&cfg, i, basis, a.depth)?;
    let sym = basis.as_str();
    match a.format {
        Format::Json => {
            let steps = t.steps.iter().map(|s| step_json(basis, s)).collect::<CliResult<Vec<_>>>()?;
            let last = t.steps.last().map(|s| &s.seed).unwrap_or(&t.initial);
            let v = json!({
                "type": cfg.lie.to_string(),
                "xi": cfg.xi.values(),
                "sign": cfg.sign,
                "basis": sym,
                "r_floor": t.initial.window().r_floor(),
                "sequence": {"label": t.sequence.label, "steps": t.sequence.steps.iter().map(|&v| vertex_json(v)).collect::<Vec<_>>()},
                "initial": seed_to_json(&t.initial)?,
                "steps": steps,
                "final": seed_to_json(last)?,
            });
            write_json(out, &v)?;
        }
        Format::Latex => {
            for s in &t.steps {
                let deg = s.degree.as_ref().map(|d| format!(" \\quad \\deg = {d}")).unwrap_or_default();
                writeln!(
                    out,
                    "{sym}_{{{},{}}}^{{({})}} = {}{deg} \\\\",
                    s.vertex.node,
                    s.vertex.r,
                    s.pass,
                    poly_to_latex(&s.poly)
                )?;
            }
        }
        Format::Text => {
            writeln!(
                out,
                "{} on {} xi=({}) basis {sym}: {} steps",
                t.sequence.label,
                cfg.lie,
                cfg.xi.values().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                t.steps.len()
            )?;
            for s in &t.steps {
                let deg = s.degree.as_ref().map(|d| format!(" deg {d}")).unwrap_or_default();
                writeln!(out, "[step {}] {}^({}){deg} terms {}", s.step, s.vertex, s.pass, s.poly.len())?;
                writeln!(out, "  {sym}: {}", poly_to_text(&s.poly))?;
                if let Some(y) = &s.y_form {
                    writeln!(out, "  Y: {}", poly_to_text(y))?;
                }
            }
        }
    }
    Ok(())
}

pub fn cartan(a: &CartanArgs, out: &mut dyn Write) -> CliResult<()> {
    let cd = CartanData::new(a.lie, a.degree);
    let table = cd.table(a.degree)?;
    match a.format {
        Format::Json => write_json(out, &json!({"type": a.lie.to_string(), "degree": a.degree, "ctilde": table}))?,
        _ => {
            writeln!(out, "{} C~_ij(m), m = 1..{}", a.lie, a.degree)?;
            for (i, row) in table.iter().enumerate() {
                for (j, series) in row.iter().enumerate() {
                    let vals: Vec<String> = series.iter().skip(1).map(|c| c.to_string()).collect();
                    writeln!(out, "({},{}): {}", i + 1, j + 1, vals.join(" "))?;
                }
            }
        }
    }
    Ok(())
}
