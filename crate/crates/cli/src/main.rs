//! `groupwalk`: build and validate finite groups, check the convolution
//! homomorphism, and analyze or simulate random walks.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage, parse or I/O error.

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "groupwalk", version, about = "Random walks on finite groups")]
struct Cli {
    /// Progress messages on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or validate a Cayley table.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Distribution files.
    #[command(subcommand)]
    Dist(DistCommand),
    /// Print the convolution matrix of a distribution.
    Conmat(ConmatArgs),
    /// Check Con(X·Y) = Con(X)Con(Y) on random distribution pairs.
    LemmaCheck(LemmaCheckArgs),
    /// Exact walk analysis: TV to uniform per step, SLEM, period.
    Walk(WalkArgs),
    /// Seeded Monte Carlo simulation of the walk.
    Simulate(SimulateArgs),
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Write the Cayley table of a group.
    Build {
        #[command(flatten)]
        group: GroupSource,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the group axioms and print the report.
    Validate {
        #[command(flatten)]
        group: GroupSource,
    },
}

#[derive(Subcommand, Debug)]
enum DistCommand {
    /// Parse a distribution file and report its support.
    Check {
        #[command(flatten)]
        group: GroupSource,
        #[command(flatten)]
        dist: DistArgs,
    },
}

/// Exactly one group source.
#[derive(Args, Debug, Clone)]
pub struct GroupSource {
    #[command(flatten)]
    pub kind: GroupKind,
    /// Skip the associativity scan above this order.
    #[arg(long, value_name = "ORDER", default_value_t = groupwalk::group::DEFAULT_ASSOCIATIVITY_LIMIT)]
    pub assoc_limit: usize,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct GroupKind {
    /// Cyclic group Z_N.
    #[arg(long, value_name = "N")]
    pub cyclic: Option<usize>,
    /// Dihedral group of order 2M.
    #[arg(long, value_name = "M")]
    pub dihedral: Option<usize>,
    /// Symmetric group S_K.
    #[arg(long, value_name = "K")]
    pub symmetric: Option<usize>,
    /// Direct product of two Cayley table files.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub product: Option<Vec<PathBuf>>,
    /// Cayley table file.
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct DistArgs {
    /// Distribution file: `index probability` per line, 1-based.
    #[arg(long = "dist", value_name = "FILE")]
    pub path: PathBuf,
    /// Scale the listed weights to sum to one.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct ConmatArgs {
    #[command(flatten)]
    pub group: GroupSource,
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LemmaCheckArgs {
    #[command(flatten)]
    pub group: GroupSource,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct WalkArgs {
    #[command(flatten)]
    pub group: GroupSource,
    #[command(flatten)]
    pub dist: DistArgs,
    /// TV threshold, in (0, 1).
    #[arg(long, default_value_t = groupwalk::walk::DEFAULT_EPSILON)]
    pub eps: f64,
    #[arg(long, default_value_t = groupwalk::walk::DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the TV sequence as CSV.
    #[arg(long, value_name = "FILE")]
    pub tv_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub group: GroupSource,
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long)]
    pub steps: u64,
    #[arg(long)]
    pub trajectories: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context {
        verbose: cli.verbose > 0,
    };
    let result = match cli.command {
        Command::Group(GroupCommand::Build { group, output }) => {
            commands::group_build(&ctx, &group, output.as_deref())
        }
        Command::Group(GroupCommand::Validate { group }) => commands::group_validate(&ctx, &group),
        Command::Dist(DistCommand::Check { group, dist }) => commands::dist_check(&ctx, &group, &dist),
        Command::Conmat(args) => commands::conmat(&ctx, &args),
        Command::LemmaCheck(args) => commands::lemma_check(&ctx, &args),
        Command::Walk(args) => commands::walk(&ctx, &args),
        Command::Simulate(args) => commands::simulate(&ctx, &args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
