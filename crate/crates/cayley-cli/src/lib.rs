//! Command-line front end: argument parsing, commands and report rendering.

pub mod commands;
pub mod error;
pub mod parse;
pub mod report;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use cayley::Exec;

use commands::{CollectionSource, G2Command, Space};
use error::CommandError;
use report::{Format, ReportDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "cayley", version, about = "Exact cohomology and derived-category checks on the Cayley Grassmannian")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for the randomized G2 sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sheaf cohomology of a bundle expression.
    Coh {
        #[arg(long, value_enum, default_value = "cg")]
        space: Space,
        expr: String,
    },
    /// Ext between two objects.
    Ext { from: String, to: String },
    /// Euler pairing of two objects.
    Euler { from: String, to: String },
    /// Cohomology of S^c U* for the 42 tabulated weights.
    Table,
    /// Checks that a collection is exceptional (and Lefschetz when blocks are given).
    CheckCollection {
        #[arg(long, conflicts_with = "file")]
        builtin: Option<Builtin>,
        file: Option<PathBuf>,
        /// Print the collection instead of checking it.
        #[arg(long)]
        print: bool,
    },
    /// The residual category.
    Residual,
    /// G2 multilinear algebra.
    #[command(subcommand)]
    G2(G2Command),
    /// Runs every acceptance criterion.
    VerifyAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Builtin {
    Cg15,
}

/// Rendered output and exit code of one invocation.
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
    /// Goes to stderr.
    pub message: Option<String>,
}

fn exec_for(jobs: Option<usize>) -> Exec {
    match jobs {
        Some(1) => Exec::Sequential,
        #[cfg(feature = "parallel")]
        Some(n) => {
            // The global pool can only be built once per process.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Exec::default()
        }
        _ => Exec::default(),
    }
}

pub fn dispatch(cli: &Cli) -> Result<ReportDocument, CommandError> {
    let exec = exec_for(cli.jobs);
    match &cli.command {
        Command::Coh { space, expr } => commands::coh(*space, expr),
        Command::Ext { from, to } => commands::ext(from, to),
        Command::Euler { from, to } => commands::euler_cmd(from, to),
        Command::Table => Ok(commands::table(exec)),
        Command::CheckCollection { builtin, file, print } => {
            let src = match (builtin, file) {
                (Some(Builtin::Cg15), _) => CollectionSource::Builtin,
                (None, Some(p)) => CollectionSource::File(p.clone()),
                (None, None) => return Err(CommandError::Usage("give --builtin cg15 or a file".into())),
            };
            commands::check_collection(src, *print, exec)
        }
        Command::Residual => commands::residual(exec),
        Command::G2(g) => commands::g2_cmd(g, cli.seed, exec),
        Command::VerifyAll => Ok(commands::verify_all(cli.seed, exec)),
    }
}

/// Parses arguments and runs the command without touching the process.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return if e.use_stderr() {
                Outcome { output: String::new(), exit_code: EXIT_USAGE, message: Some(e.to_string()) }
            } else {
                Outcome { output: e.to_string(), exit_code: EXIT_OK, message: None }
            };
        }
    };
    match dispatch(&cli) {
        Ok(doc) => {
            let output = doc.render(cli.format);
            if let Some(p) = &cli.out {
                if let Err(e) = std::fs::write(p, &output) {
                    return Outcome { output: String::new(), exit_code: EXIT_USAGE, message: Some(e.to_string()) };
                }
                return Outcome { output: String::new(), exit_code: doc.exit_code, message: None };
            }
            Outcome { output, exit_code: doc.exit_code, message: None }
        }
        Err(e) => Outcome { output: String::new(), exit_code: e.exit_code(), message: Some(format!("error: {e}")) },
    }
}
