//! `lacunary`: batch front end for the independence toolkit.
//!
//! Every subcommand reads a JSON problem file and writes a JSON report to
//! stdout (or `--out`). Exit codes: 0 verdict produced, 2 hypothesis or
//! base failure, 3 input error, 4 precision exhausted.

mod commands;
mod problem;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lacunary::criterion::Mode;
use lacunary::Error;

#[derive(Parser, Debug)]
#[command(name = "lacunary", version, about = "Certified independence decisions for lacunary series over Q(q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the base q as Pisot, Salem or neither.
    Classify(Common),
    /// Pairwise equivalence witnesses, classes and canonical forms.
    Equiv(Common),
    /// Condition (i) certificate for the order polynomials.
    Condition(Common),
    /// Full pipeline: classification, symbolic verdict, numeric cross-check.
    Decide(Common),
    /// Certified enclosures of the series and theta values.
    Eval(Common),
    /// Integer-relation hunt over Q(q) among the series values.
    Hunt(Common),
    /// Re-check a report: certificates, residuals and reproducibility.
    Verify(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Problem file (for `verify`, a report written by another command).
    pub input: PathBuf,
    /// Working precision in bits.
    #[arg(long)]
    pub prec: Option<u32>,
    /// Coefficient bound for relation hunts.
    #[arg(long)]
    pub height: Option<String>,
    /// LLL parameter, a rational in (1/4, 1).
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// Check condition (i) on every nonempty subset.
    #[arg(long)]
    pub subsets: bool,
    /// Require algebraic-integer numerator coefficients.
    #[arg(long)]
    pub strict: bool,
    /// Precision cap for base classification.
    #[arg(long)]
    pub precision_cap: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError { code: 3, kind: "input", message }
    }

    pub fn hypothesis(message: String) -> Self {
        CliError { code: 2, kind: "hypothesis", message }
    }

    pub fn context(mut self, what: String) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Hypothesis(_) | Error::NotInNullspace => (2, "hypothesis"),
            Error::Undecided { .. } | Error::PrecisionExhausted(_) | Error::DependentBasis => (4, "precision"),
            _ => (3, "input"),
        };
        CliError { code, kind, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Classify(a) => ("classify", a),
        Command::Equiv(a) => ("equiv", a),
        Command::Condition(a) => ("condition", a),
        Command::Decide(a) => ("decide", a),
        Command::Eval(a) => ("eval", a),
        Command::Hunt(a) => ("hunt", a),
        Command::Verify(a) => ("verify", a),
    };
    let (text, code) = commands::run(name, args);
    if let Some(msg) = &code.1 {
        eprintln!("lacunary {name}: {msg}");
    }
    let written = match &args.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            // a closed pipe downstream is not our failure
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(format!("cannot write stdout: {e}")),
                _ => Ok(()),
            }
        }
    };
    if let Err(msg) = written {
        eprintln!("lacunary {name}: {msg}");
        return ExitCode::from(3);
    }
    ExitCode::from(code.0)
}
