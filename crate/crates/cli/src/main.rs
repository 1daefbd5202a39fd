mod args;
mod commands;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Process outcome, mapped onto the documented exit codes.
#[derive(Debug)]
pub enum Failure {
    /// 1: unreadable or malformed input, unwritable output.
    Io(String),
    /// 2: the model or fit rejected the input.
    Rejected(String),
    /// 3: invalid arguments.
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Rejected(_) => 2,
            Failure::Usage(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Rejected(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<igam::Error> for Failure {
    fn from(e: igam::Error) -> Self {
        use igam::Error::*;
        let msg = e.to_string();
        match e {
            Io(_) | MalformedInput { .. } | NodeOutOfRange { .. } | MissingHeights(_) | MissingCoordinates => {
                Failure::Io(msg)
            }
            InvalidParams(_) | InvalidCut | LevelOutOfRange { .. } => Failure::Usage(msg),
            _ => Failure::Rejected(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cli = match &cli.global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            cli.apply_config(&text).map_err(Failure::Usage)?
        }
        None => cli,
    };
    commands::dispatch(cli)
}
