use std::io::Write;

use clap::Parser;
use qtchar_cli::{run, sign_from_env, Cli, CliError, EXIT_OK, SIGN_ENV};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let env = std::env::var(SIGN_ENV).ok();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = sign_from_env(env.as_deref()).and_then(|sign| run(cli, sign, &mut out));
    let _ = out.flush();
    match result {
        Ok(()) => std::process::exit(EXIT_OK),
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
