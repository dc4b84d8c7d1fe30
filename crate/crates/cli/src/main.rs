//! `ccs`: check, solve, analyze and refine `.ccs` files.
//!
//! Exit codes: 0 success, 1 the engine said no (diagnostics, unsolvable,
//! transfer failure, failed verification), 2 usage or input errors.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{AnalyzeArgs, Outcome};
use report::{Body, Document};

#[derive(Parser)]
#[command(name = "ccs", version, about = "Cognitive category toolkit")]
struct Cli {
    /// Print one JSON document instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a file; exit 0 iff there are no diagnostics.
    Check { file: PathBuf },
    /// Find a shortest plan for a problem.
    Solve {
        file: PathBuf,
        problem: String,
        #[arg(long)]
        max_depth: Option<usize>,
        /// Solve between the evaluator's blocks holding the outset and the goal.
        #[arg(long, value_name = "EVALUATOR")]
        quotient: Option<String>,
    },
    /// Report generator-set properties.
    Analyze {
        file: PathBuf,
        #[arg(long, num_args = 1.., value_name = "GENERATOR")]
        omnipotent: Option<Vec<String>>,
        /// With --omnipotent: is the set also of minimum size?
        #[arg(long, requires = "omnipotent")]
        reduced: bool,
        /// Print the canonical set, of CATEGORY or the one in scope.
        #[arg(long, num_args = 0..=1, value_name = "CATEGORY")]
        canonical: Option<Option<String>>,
        #[arg(long, value_name = "GENERATOR")]
        purposeful: Option<String>,
        /// Evaluator name followed by generator names.
        #[arg(long, num_args = 2.., value_names = ["EVALUATOR", "GENERATOR"])]
        controllable: Option<Vec<String>>,
    },
    /// Split a relation's multi-outcome states into a deterministic refinement.
    Refine {
        file: PathBuf,
        relation: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Bell number B(n), n ≤ 500.
    Bell { n: usize },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Solve { .. } => "solve",
            Command::Analyze { .. } => "analyze",
            Command::Refine { .. } => "refine",
            Command::Bell { .. } => "bell",
        }
    }

    fn run(self) -> Outcome {
        match self {
            Command::Check { file } => commands::check(&file),
            Command::Solve {
                file,
                problem,
                max_depth,
                quotient,
            } => commands::solve_cmd(&file, &problem, max_depth, quotient.as_deref()),
            Command::Analyze {
                file,
                omnipotent,
                reduced,
                canonical,
                purposeful,
                controllable,
            } => {
                let args = AnalyzeArgs {
                    omnipotent,
                    reduced,
                    canonical,
                    purposeful,
                    controllable: controllable.map(|mut v| {
                        let ev = v.remove(0);
                        (ev, v)
                    }),
                };
                commands::analyze(&file, &args)
            }
            Command::Refine {
                file,
                relation,
                out,
            } => commands::refine_cmd(&file, &relation, out.as_deref()),
            Command::Bell { n } => commands::bell(n),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = cli.command.name();
    let Outcome { exit_code, body } = cli.command.run();
    let doc = Document {
        command,
        exit_code,
        body,
    };
    // a closed stdout is not worth a panic
    let _ = if cli.json {
        let text = serde_json::to_string_pretty(&doc).expect("reports serialize");
        writeln!(std::io::stdout(), "{text}")
    } else if matches!(doc.body, Body::Error(_)) {
        write!(std::io::stderr(), "{}", doc.body)
    } else {
        write!(std::io::stdout(), "{}", doc.body)
    };
    ExitCode::from(exit_code as u8)
}
