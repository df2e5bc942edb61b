//! `polychor`: the command-line front end.
//!
//! Exit codes: 0 success, 1 language error (parse, type or projection),
//! 2 verification violation, 3 usage error.

mod args;
mod verbs;

use args::{Cli, Format};
use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;
use std::process::ExitCode;

/// Why a verb did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// The input is not a valid program.
    Language {
        stage: &'static str,
        message: String,
        file: String,
        /// `line:col` of the offending item, when known.
        at: Option<(usize, usize)>,
    },
    /// A checked property does not hold. The report has already been printed.
    Violation,
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Language { .. } => 1,
            Failure::Violation => 2,
            Failure::Usage(_) => 3,
        }
    }
}

fn report(f: &Failure, format: Format) {
    match (f, format) {
        (Failure::Violation, _) => {}
        (Failure::Language { stage, message, file, at }, Format::Text) => match at {
            Some((line, col)) => eprintln!("{file}:{line}:{col}: {stage} error: {message}"),
            None => eprintln!("{file}: {stage} error: {message}"),
        },
        (Failure::Language { stage, message, file, at }, Format::Json) => {
            let (line, col) = at.map_or((None, None), |(l, c)| (Some(l), Some(c)));
            let v = json!({"error": {"kind": stage, "message": message, "file": file, "line": line, "col": col}});
            println!("{v}");
        }
        (Failure::Usage(m), Format::Text) => eprintln!("usage error: {m}"),
        (Failure::Usage(m), Format::Json) => println!("{}", json!({"error": {"kind": "usage", "message": m}})),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match verbs::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report(&f, cli.format);
            ExitCode::from(f.code())
        }
    }
}
