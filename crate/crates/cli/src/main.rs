//! `latsuper`: normal lattice supercharacter theories from the command line.
//!
//! Exit codes: 0 success, 1 input or precondition error, 2 verification
//! failure. Errors are printed to stdout as JSON.

mod commands;
mod error;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "latsuper", version, about = "Normal lattice supercharacter theories of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the supercharacter table.
    Sct(TableArgs),
    /// Run the full verification suite.
    Verify(VerifyArgs),
    /// Expand a product of two supercharacters.
    Product(ProductArgs),
    /// Restrict a supercharacter to a subgroup.
    Restrict(RestrictArgs),
    /// Describe the lattice: nodes, covers, irreducibles.
    Lattice(LatticeArgs),
    /// Export the lattice as JSON, DOT or CSV.
    Export(LatticeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Group spec JSON, or a table artifact written by `sct`.
    #[arg(long)]
    pub group: PathBuf,
    /// Sublattice JSON: a list of generating subgroups, `{"nodes": ...}`,
    /// `{"kind": "subspaces"}` or `{"kind": "basis", "basis": [...]}`.
    #[arg(long)]
    pub sublattice: Option<PathBuf>,
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Dot,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Cases per check above which checks are sampled.
    #[arg(long, default_value_t = 50_000)]
    pub exhaustive_limit: usize,
    #[arg(long, default_value_t = 2_000)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct ProductArgs {
    #[command(flatten)]
    pub common: Common,
    /// Node reference: generators like `3` or `[0,3,6,9]`, or `node:<index>`.
    #[arg(long)]
    pub left: String,
    #[arg(long)]
    pub right: String,
}

#[derive(Args, Debug)]
pub struct RestrictArgs {
    #[command(flatten)]
    pub common: Common,
    /// Subgroup `H`: a group spec (with `--embedding`) or a member list of
    /// the group (inclusion).
    #[arg(long)]
    pub subgroup: PathBuf,
    /// `{"map": [...]}` giving the image of each element of `H`.
    #[arg(long)]
    pub embedding: Option<PathBuf>,
    /// Sublattice JSON for `H`; defaults to all normal subgroups of `H`.
    #[arg(long)]
    pub subgroup_sublattice: Option<PathBuf>,
    /// Node of the group lattice whose supercharacter is restricted.
    #[arg(long)]
    pub anchor: String,
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    #[command(flatten)]
    pub common: Common,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.quiet {
                let _ = writeln!(std::io::stdout(), "{}", e.to_json());
            }
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common = match &cli.command {
        Command::Sct(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::Product(a) => &a.common,
        Command::Restrict(a) => &a.common,
        Command::Lattice(a) | Command::Export(a) => &a.common,
    };
    if let Some(jobs) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| CliError::input("jobs", e.to_string()))?;
    }
    match &cli.command {
        Command::Sct(a) => commands::sct(a),
        Command::Verify(a) => commands::verify(a),
        Command::Product(a) => commands::product(a),
        Command::Restrict(a) => commands::restrict(a),
        Command::Lattice(a) => commands::lattice(a),
        Command::Export(a) => commands::export(a),
    }
}
