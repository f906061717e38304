//! NDJSON session protocol: one JSON request per line, one JSON response per line.
//!
//! Requests are objects `{"op": ..., "id"?: any, "session"?: string, ...}` with ops
//! `init`, `mutate`, `undo`, `apply_sequence`, `get_var` and `snapshot`. Responses are
//! `{"id", "session", "ok": true, "result"}` or `{"id", "session", "ok": false, "error": {"kind", "message"}}`.
//! A failed request leaves its session unchanged.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;

use qtchar_core::format::{poly_to_json, poly_to_latex, poly_to_text, seed_to_json};
use qtchar_core::oplus::y_form;
use qtchar_core::{
    sequence_si, Basis, Config, Error, HeightFunction, LieType, QuantumSeed, SignConvention, Vertex, WindowVariant,
};
use serde_json::{json, Value};

use crate::CliResult;

pub const DEFAULT_MAX_UNDO: usize = 256;
const DEFAULT_SESSION: &str = "default";

/// A protocol error: stable `kind` plus a human-readable message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolError {
    pub kind: &'static str,
    pub message: String,
}

impl ProtocolError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        ProtocolError { kind, message: message.into() }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new("bad_request", message)
    }
}

impl From<Error> for ProtocolError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::FrozenVertex(_) => "frozen_vertex",
            Error::VertexNotInWindow(_) => "vertex_not_in_window",
            Error::WindowTooShallow { .. } => "window_too_shallow",
            e if e.is_internal() => "internal",
            _ => "engine",
        };
        ProtocolError::new(kind, e.to_string())
    }
}

type PResult<T> = std::result::Result<T, ProtocolError>;

/// One exploration session: the initial seed, the current seed, and an undo stack.
#[derive(Clone, Debug)]
pub struct Session {
    pub id: String,
    pub config: Config,
    pub initial: QuantumSeed,
    pub current: QuantumSeed,
    /// Vertices mutated since `initial`, in order.
    pub history: Vec<Vertex>,
    undo: Vec<(QuantumSeed, usize)>,
    pub max_undo: usize,
}

impl Session {
    pub fn new(id: String, config: Config, initial: QuantumSeed, max_undo: usize) -> Self {
        Session { id, config, current: initial.clone(), initial, history: Vec::new(), undo: Vec::new(), max_undo }
    }

    pub fn undo_depth(&self) -> usize {
        self.undo.len()
    }

    fn push_undo(&mut self) {
        if self.max_undo == 0 {
            return;
        }
        if self.undo.len() == self.max_undo {
            self.undo.remove(0);
        }
        self.undo.push((self.current.clone(), self.history.len()));
    }

    /// Mutates along `steps` atomically.
    pub fn apply(&mut self, steps: &[Vertex]) -> PResult<()> {
        let next = self.current.apply_sequence(steps)?;
        self.push_undo();
        self.current = next;
        self.history.extend_from_slice(steps);
        Ok(())
    }

    pub fn undo(&mut self) -> PResult<()> {
        let (seed, len) =
            self.undo.pop().ok_or_else(|| ProtocolError::new("nothing_to_undo", "undo stack is empty"))?;
        self.current = seed;
        self.history.truncate(len);
        Ok(())
    }

    pub fn snapshot(&self) -> PResult<Value> {
        Ok(json!({
            "session": self.id,
            "undo_depth": self.undo.len(),
            "history": self.history.iter().map(|v| json!([v.node, v.r])).collect::<Vec<_>>(),
            "seed": seed_to_json(&self.current)?,
        }))
    }
}

/// All sessions of one connection (or of the stdio stream).
#[derive(Debug)]
pub struct Server {
    sign: SignConvention,
    sessions: BTreeMap<String, Session>,
}

fn field<'a>(req: &'a Value, key: &str) -> PResult<&'a Value> {
    req.get(key).ok_or_else(|| ProtocolError::bad_request(format!("missing field `{key}`")))
}

fn as_str<'a>(v: &'a Value, key: &str) -> PResult<&'a str> {
    v.as_str().ok_or_else(|| ProtocolError::bad_request(format!("`{key}` must be a string")))
}

fn as_int(v: &Value, key: &str) -> PResult<i64> {
    v.as_i64().ok_or_else(|| ProtocolError::bad_request(format!("`{key}` must be an integer")))
}

fn parse_vertex(v: &Value) -> PResult<Vertex> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([i, r]) => {
            let i = usize::try_from(as_int(i, "vertex")?).map_err(|_| ProtocolError::bad_request("negative node"))?;
            let r = i32::try_from(as_int(r, "vertex")?).map_err(|_| ProtocolError::bad_request("r out of range"))?;
            Ok(Vertex::new(i, r))
        }
        _ => Err(ProtocolError::bad_request("vertex must be [node, r]")),
    }
}

/// Default window floor: deep enough for every `S_i`.
pub fn default_floor(lie: LieType, xi: &HeightFunction) -> Result<i32, Error> {
    let mut floor = 0;
    for i in lie.nodes() {
        let s = sequence_si(lie, xi, i)?;
        floor = floor.min(s.required_floor().unwrap_or(xi.top(i) - 2));
    }
    Ok(floor)
}

impl Server {
    pub fn new(sign: SignConvention) -> Self {
        Server { sign, sessions: BTreeMap::new() }
    }

    pub fn session(&self, id: &str) -> Option<&Session> {
        self.sessions.get(id)
    }

    /// Handles one request line and returns the response object.
    pub fn handle_line(&mut self, line: &str) -> Value {
        let req: Value = match serde_json::from_str(line) {
            Ok(v) => v,
            Err(e) => return error_response(&Value::Null, None, ProtocolError::new("parse", e.to_string())),
        };
        let id = req.get("id").cloned().unwrap_or(Value::Null);
        let sid = match req.get("session") {
            None => DEFAULT_SESSION.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => {
                return error_response(&id, None, ProtocolError::bad_request("`session` must be a string"));
            }
        };
        match self.dispatch(&req, &sid) {
            Ok(result) => json!({"id": id, "session": sid, "ok": true, "result": result}),
            Err(e) => error_response(&id, Some(&sid), e),
        }
    }

    fn dispatch(&mut self, req: &Value, sid: &str) -> PResult<Value> {
        if !req.is_object() {
            return Err(ProtocolError::bad_request("request must be a JSON object"));
        }
        let op = as_str(field(req, "op")?, "op")?;
        if op == "init" {
            let s = self.init(req, sid)?;
            let snap = s.snapshot()?;
            self.sessions.insert(sid.to_string(), s);
            return Ok(snap);
        }
        let session = self
            .sessions
            .get_mut(sid)
            .ok_or_else(|| ProtocolError::new("no_session", format!("session `{sid}` is not initialized")))?;
        match op {
            "snapshot" => session.snapshot(),
            "mutate" => {
                let v = parse_vertex(field(req, "vertex")?)?;
                session.apply(&[v])?;
                session.snapshot()
            }
            "undo" => {
                session.undo()?;
                session.snapshot()
            }
            "apply_sequence" => {
                let steps = sequence_steps(session, req)?;
                session.apply(&steps)?;
                session.snapshot()
            }
            "get_var" => get_var(session, parse_vertex(field(req, "vertex")?)?),
            other => Err(ProtocolError::bad_request(format!("unknown op `{other}`"))),
        }
    }

    fn init(&self, req: &Value, sid: &str) -> PResult<Session> {
        let lie: LieType = as_str(field(req, "type")?, "type")?.parse()?;
        let xi = match (req.get("xi"), req.get("parity")) {
            (Some(v), _) => {
                let vals = v
                    .as_array()
                    .ok_or_else(|| ProtocolError::bad_request("`xi` must be an array"))?
                    .iter()
                    .map(|x| {
                        as_int(x, "xi").and_then(|x| u8::try_from(x).map_err(|_| ProtocolError::bad_request("bad xi")))
                    })
                    .collect::<PResult<Vec<u8>>>()?;
                HeightFunction::new(lie, vals)?
            }
            (None, Some(p)) => HeightFunction::default_for(lie, (as_int(p, "parity")?.rem_euclid(2)) as u8),
            (None, None) => HeightFunction::default_for(lie, 0),
        };
        let sign = match req.get("sign") {
            Some(s) => as_str(s, "sign")?.parse()?,
            None => self.sign,
        };
        let basis: Basis = match req.get("basis") {
            Some(b) => as_str(b, "basis")?.parse()?,
            None => Basis::Z,
        };
        let floor = match req.get("r_floor") {
            Some(f) => i32::try_from(as_int(f, "r_floor")?).map_err(|_| ProtocolError::bad_request("bad r_floor"))?,
            None => default_floor(lie, &xi)?,
        };
        let max_undo = match req.get("max_undo") {
            Some(m) => {
                usize::try_from(as_int(m, "max_undo")?).map_err(|_| ProtocolError::bad_request("bad max_undo"))?
            }
            None => DEFAULT_MAX_UNDO,
        };
        let cfg = Config::new(lie, xi, sign)?;
        let variant = if basis == Basis::Z { WindowVariant::GammaMinus } else { WindowVariant::Gminus };
        let seed = cfg.seed(variant, floor, basis)?;
        Ok(Session::new(sid.to_string(), cfg, seed, max_undo))
    }
}

fn sequence_steps(session: &Session, req: &Value) -> PResult<Vec<Vertex>> {
    match (req.get("sequence"), req.get("vertices")) {
        (Some(s), None) => {
            let name = as_str(s, "sequence")?;
            let i: usize = name
                .strip_prefix('S')
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| ProtocolError::bad_request(format!("unknown sequence `{name}`")))?;
            let cfg = &session.config;
            Ok(sequence_si(cfg.lie, &cfg.xi, i)?.steps)
        }
        (None, Some(vs)) => vs
            .as_array()
            .ok_or_else(|| ProtocolError::bad_request("`vertices` must be an array"))?
            .iter()
            .map(parse_vertex)
            .collect(),
        _ => Err(ProtocolError::bad_request("give exactly one of `sequence` or `vertices`")),
    }
}

fn get_var(session: &Session, v: Vertex) -> PResult<Value> {
    let seed = &session.current;
    let p = seed.var(v)?;
    let mut out = json!({
        "vertex": [v.node, v.r],
        "poly": poly_to_json(seed.basis(), p)?,
        "latex": poly_to_latex(p),
        "text": poly_to_text(p),
    });
    if seed.basis() == Basis::Z {
        if let Ok((y, d)) = y_form(seed.torus(), p) {
            out["degree"] = json!(d.to_string());
            out["y_form"] = poly_to_json(Basis::Y, &y)?;
        }
    }
    Ok(out)
}

fn error_response(id: &Value, sid: Option<&str>, e: ProtocolError) -> Value {
    json!({"id": id, "session": sid, "ok": false, "error": {"kind": e.kind, "message": e.message}})
}

/// Serves requests from `input` until end of stream; blank lines are ignored.
pub fn serve<R: BufRead>(input: R, out: &mut dyn Write, sign: SignConvention) -> CliResult<()> {
    let mut server = Server::new(sign);
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let resp = server.handle_line(&line);
        writeln!(out, "{resp}")?;
        out.flush()?;
    }
    Ok(())
}

/// Listens on `127.0.0.1:port` (0 picks a free port, reported on stderr); one thread per connection.
pub fn serve_tcp(port: u16, sign: SignConvention) -> CliResult<()> {
    let listener = TcpListener::bind(("127.0.0.1", port))?;
    eprintln!("listening on {}", listener.local_addr()?);
    for stream in listener.incoming() {
        let stream = stream?;
        std::thread::spawn(move || {
            let Ok(reader) = stream.try_clone() else { return };
            let mut writer = stream;
            let _ = serve(BufReader::new(reader), &mut writer, sign);
        });
    }
    Ok(())
}
