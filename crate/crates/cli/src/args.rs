//! Command-line grammar.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "polychor", version, about = "Typecheck, run, project and verify choreographies")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Random,
    Roundrobin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    Completeness,
    Soundness,
    Deadlock,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Parse a program and print it in canonical form.
    Parse { file: PathBuf },
    /// Typecheck a program and print the normalized type of `main`.
    Check { file: PathBuf },
    /// Evaluate `main` with the choreographic semantics.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
        /// Print one line per step.
        #[arg(long)]
        trace: bool,
        /// Print the steps as a JSON array.
        #[arg(long)]
        trace_json: bool,
    },
    /// Project `main` to local programs.
    Project {
        file: PathBuf,
        /// Print the program of one process.
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        role: Option<String>,
        /// Write every process and the definitions to `<out>/<P>.local` and `<out>/defs.local`.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the projected network under a scheduler.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Policy::Random)]
        policy: Policy,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
        /// Print the trace as a JSON array.
        #[arg(long)]
        trace_json: bool,
    },
    /// Check a correspondence theorem by bounded exploration.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        /// Exploration depth for soundness and deadlock freedom.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Choreography steps to follow.
        #[arg(long, default_value_t = 1_000)]
        fuel: usize,
        /// Also write the reports to this file as JSON.
        #[arg(long)]
        report_json: Option<PathBuf>,
    },
    /// List the bundled examples, print one, or write them all to a directory.
    Examples {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        out: Option<PathBuf>,
    },
}
