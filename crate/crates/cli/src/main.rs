mod commands;
mod input;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use plane_sheaves::Error;

/// Fixed default so that reports are reproducible.
pub const DEFAULT_SEED: u64 = 20_260_601;

#[derive(Parser, Debug)]
#[command(name = "psheaf", version, about = "Exact computations with sheaves on plane curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stratum, profile and normalization of a multiplicity-6 presentation
    Classify {
        /// JSON file, inline JSON, or - for stdin
        #[arg(long)]
        input: String,
    },
    /// Generate and check every registry row, plus the dimension audits
    VerifyTables {
        #[arg(long)]
        chi: Option<i64>,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// also write report.json and report.md here
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Point configurations
    Points {
        #[command(subcommand)]
        command: PointsCommand,
    },
    /// Hilbert polynomial and cohomology of twists
    Hilbert {
        #[arg(long)]
        input: String,
    },
    /// Presentation of the dual sheaf
    Dual {
        #[arg(long)]
        input: String,
    },
    /// Semistability of a matrix of linear forms, {"rows": [["X", "Y"], ...]}
    KronCheck {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 24)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the stability criteria that apply to the shape
    Stability {
        #[arg(long)]
        input: String,
    },
    /// Random instance of a registry row
    Gen {
        #[arg(long)]
        chi: i64,
        #[arg(long)]
        stratum: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Dimension counts for registry rows
    Dims {
        #[arg(long)]
        chi: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
pub enum PointsCommand {
    /// Betti shape of the ideal, {"points": [["1", "0", "0"], ...]}
    Resolve {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = plane_sheaves::points::DEFAULT_CAP)]
        cap: u32,
    },
    /// Check a resolution claim on a configuration
    Claim {
        #[arg(long)]
        claim: String,
        #[arg(long)]
        input: String,
    },
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::Inhomogeneous { .. }
            | Error::EntryDegree { .. }
            | Error::Shape(_)
            | Error::DegreeMismatch(_) => 2,
            Error::ProfileNotInTable { .. } => 3,
            Error::Precondition(_)
            | Error::NotOneDimensional(_)
            | Error::UnsupportedMultiplicity(_)
            | Error::ResolutionIncomplete { .. }
            | Error::NoSuchRow { .. } => 4,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
