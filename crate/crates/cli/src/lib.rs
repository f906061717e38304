//! Command-line front end and NDJSON session service for `qtchar_core`.

pub mod commands;
pub mod session;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtchar_core::{Error, HeightFunction, LieType, Node, SignConvention};

/// Environment variable overriding the sign convention of the commutation rule.
pub const SIGN_ENV: &str = "QTCHAR_SIGN";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SHALLOW: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Engine(#[from] Error),
    #[error("{0}")]
    Failed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Engine(Error::WindowTooShallow { .. }) => EXIT_SHALLOW,
            CliError::Engine(e) if e.is_internal() => EXIT_INTERNAL,
            CliError::Engine(_) => EXIT_USAGE,
            CliError::Failed(_) | CliError::Io(_) => EXIT_INTERNAL,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "qtchar", version, about = "Exact (q,t)-characters via quantum cluster mutation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Character of a Kirillov-Reshetikhin module.
    Chars(CharsArgs),
    /// Checks one quantum T-system relation.
    Tsystem(TsystemArgs),
    /// Step-by-step dump of a mutation sequence.
    Trace(TraceArgs),
    /// Coefficients of the inverse quantum Cartan matrix.
    Cartan(CartanArgs),
    /// Serves the NDJSON session protocol.
    Serve(ServeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Latex,
    Text,
}

#[derive(Debug, Args)]
pub struct TypeArgs {
    /// Dynkin type: A<n>, D<n>, E6, E7 or E8.
    #[arg(long = "type", value_name = "TYPE")]
    pub lie: LieType,
    /// Height function as comma-separated 0/1 values; default chosen from the parity of the target row.
    #[arg(long, value_name = "LIST")]
    pub xi: Option<String>,
}

#[derive(Debug, Args)]
pub struct CharsArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    #[arg(long)]
    pub node: Node,
    /// Spectral parameter of the module.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<i32>,
    /// KR level.
    #[arg(long, default_value_t = 1)]
    pub kr: usize,
    #[arg(long, default_value = "Y", value_parser = ["Y", "y", "z", "Z"])]
    pub basis: String,
    /// Truncated character (indices r <= 0 only).
    #[arg(long)]
    pub truncated: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Window floor.
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<i32>,
}

#[derive(Debug, Args)]
pub struct TsystemArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    #[arg(long)]
    pub node: Node,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<i32>,
    /// Use full rather than truncated characters.
    #[arg(long)]
    pub full: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<i32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    /// Sequence name, `S<i>`.
    #[arg(long)]
    pub sequence: String,
    #[arg(long, default_value = "z", value_parser = ["Y", "y", "u", "U", "z", "Z"])]
    pub basis: String,
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<i32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CartanArgs {
    #[arg(long = "type", value_name = "TYPE")]
    pub lie: LieType,
    #[arg(long, default_value_t = 14)]
    pub degree: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ServeArgs {
    /// Read requests from stdin, write responses to stdout.
    #[arg(long)]
    pub stdio: bool,
    /// Listen on 127.0.0.1:PORT; each connection is independent.
    #[arg(long)]
    pub port: Option<u16>,
}

/// Reads the sign convention from `QTCHAR_SIGN` (unset means the default).
pub fn sign_from_env(value: Option<&str>) -> CliResult<SignConvention> {
    match value {
        None => Ok(SignConvention::default()),
        Some(s) => s.parse().map_err(|e: Error| CliError::Usage(format!("{SIGN_ENV}: {e}"))),
    }
}

/// Explicit `--xi`, or the bipartite height function giving node `node` the parity of `r`.
pub fn resolve_xi(lie: LieType, xi: Option<&str>, node: Node, r: Option<i32>) -> CliResult<HeightFunction> {
    if let Some(s) = xi {
        let values = s
            .split(',')
            .map(|v| v.trim().parse::<u8>().map_err(|_| CliError::Usage(format!("bad --xi entry `{v}`"))))
            .collect::<CliResult<Vec<u8>>>()?;
        return Ok(HeightFunction::new(lie, values)?);
    }
    lie.check_node(node)?;
    let parity = r.unwrap_or(0).rem_euclid(2) as u8;
    let h = HeightFunction::default_for(lie, 0);
    Ok(if h.xi(node) == parity { h } else { HeightFunction::default_for(lie, 1) })
}

/// Runs one parsed command, writing its output to `out`.
pub fn run(cli: Cli, sign: SignConvention, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Chars(a) => commands::chars(&a, sign, out),
        Command::Tsystem(a) => commands::tsystem(&a, sign, out),
        Command::Trace(a) => commands::trace(&a, sign, out),
        Command::Cartan(a) => commands::cartan(&a, out),
        Command::Serve(a) => match a.port {
            Some(p) => session::serve_tcp(p, sign),
            None => {
                let stdin = std::io::stdin();
                session::serve(stdin.lock(), out, sign)
            }
        },
    }
}
