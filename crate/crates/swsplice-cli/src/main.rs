//! `swsplice`: analyze suspension towers, run verification sweeps and
//! evaluate plumbing graphs.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 input outside the
//! domain of a formula, 3 a checked identity failed.

mod analyze;
mod graph;
mod verify;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swsplice::{Error, ErrorKind, Rational};

#[derive(Parser)]
#[command(name = "swsplice", version, about = "Exact invariants of suspension singularity links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every invariant of the link of f + z^n.
    Analyze {
        /// Newton pairs of f, e.g. "2:3,2:5".
        #[arg(long)]
        pairs: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Plumbing graph of the link, used for K² + #V and p_g.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run an exact verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: verify::Suite,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        max_s: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(2..))]
        max_pq: u64,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Evaluate quantities of a plumbing graph file.
    Graph {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "det,homology,torsion,k2")]
        ops: Vec<graph::Op>,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl Exit {
    pub fn usage(message: impl Into<String>) -> Self {
        Exit { code: 1, message: message.into() }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Usage => 1,
            ErrorKind::Domain => 2,
            ErrorKind::Internal => 3,
        };
        Exit { code, message: e.to_string() }
    }
}

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Human-readable rational: the denominator is dropped when it is 1.
pub fn short(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Analyze { pairs, n, graph, json } => analyze::run(&pairs, n, graph.as_deref(), json.as_deref()),
        Command::Verify { suite, max_s, max_pq, max_n, seed } => {
            verify::run(suite, &verify::Bounds { max_s: max_s as usize, max_pq, max_n, seed })
        }
        Command::Graph { file, ops } => graph::run(&file, &ops),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.code)
        }
    }
}
