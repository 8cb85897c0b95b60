mod check;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fzm_core::Truth;

/// Fuzzy relational models: evaluation, behavioural distances, games and
/// modal approximation over exact rationals.
#[derive(Debug, Parser)]
#[command(name = "fzm", version)]
pub struct Cli {
    /// Print only exact rationals, without the decimal rendering.
    #[arg(long, global = true)]
    pub exact: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a modal or first-order formula.
    Eval(EvalArgs),
    /// Behavioural distance between two states, or the whole table.
    Distance(DistanceArgs),
    /// Solve the ε-bisimulation game (or the EF game with --ef).
    Game(GameArgs),
    /// Run the property suites.
    Check(CheckArgs),
    /// Build a derived model.
    Transform(TransformArgs),
    /// Standard translation of a modal formula.
    Translate(TranslateArgs),
    /// Modal formula approximating a non-expansive function.
    Approximate(ApproximateArgs),
    /// Depth-n signature of a state.
    Signature(SignatureArgs),
    /// Compare a formula's value in the model and in a neighbourhood.
    Locality(LocalityArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DepthArg {
    /// Number of rounds (modal depth).
    #[arg(long)]
    pub depth: Option<usize>,
    /// Unbounded game / greatest fixpoint.
    #[arg(long)]
    pub unbounded: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub formula: String,
    /// State to evaluate at; all states when omitted.
    #[arg(long)]
    pub state: Option<String>,
    /// Parse as a first-order formula.
    #[arg(long)]
    pub fol: bool,
    /// Free variable bound to the state (first-order only).
    #[arg(long, default_value = "x")]
    pub var: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Recurrence,
    Game,
    Kantorovich,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, requires = "b")]
    pub a: Option<String>,
    #[arg(long, requires = "a")]
    pub b: Option<String>,
    #[command(flatten)]
    pub depth: DepthArg,
    #[arg(long, value_enum, default_value = "recurrence")]
    pub method: MethodArg,
    /// Also print a separating modal formula and its gap.
    #[arg(long, requires = "a")]
    pub witness: bool,
    #[arg(long, default_value = "1/100")]
    pub delta: Truth,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Right-hand model; defaults to --model.
    #[arg(long)]
    pub model_b: Option<PathBuf>,
    /// Left state, or a comma-separated tuple with --ef.
    #[arg(long)]
    pub a: String,
    /// Right state, or a comma-separated tuple with --ef.
    #[arg(long)]
    pub b: String,
    #[arg(long)]
    pub epsilon: Truth,
    #[command(flatten)]
    pub depth: DepthArg,
    /// Replay the winner's strategy against --script.
    #[arg(long)]
    pub trace: bool,
    /// Moves of the losing player as `L:state` / `R:state`, separated by
    /// commas or spaces; `-` reads them from stdin.
    #[arg(long, requires = "trace")]
    pub script: Option<String>,
    /// Play the first-order EF game instead.
    #[arg(long)]
    pub ef: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Coincidence,
    Pseudometric,
    Invariance,
    Approximation,
    Locality,
    Translation,
    Ef,
    ZeroDistance,
    Noninvariance,
    Games,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random models per suite.
    #[arg(long, default_value_t = 50)]
    pub models: usize,
    /// Run one suite only.
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long, default_value_t = 5)]
    pub max_states: usize,
    #[arg(long, default_value_t = 3)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 2)]
    pub atoms: usize,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value_t = 12)]
    pub denominator: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformOp {
    Unravel,
    PartialUnravel,
    Restrict,
    Quotient,
    Union,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub op: TransformOp,
    #[arg(long)]
    pub model: PathBuf,
    /// Second model for `union`.
    #[arg(long)]
    pub model_b: Option<PathBuf>,
    #[arg(long)]
    pub root: Option<String>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub radius: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[arg(long)]
    pub formula: String,
    #[arg(long, default_value = "x")]
    pub var: String,
}

#[derive(Debug, Args)]
pub struct ApproximateArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// File of `fun <state> <value>` lines.
    #[arg(long)]
    pub fun: PathBuf,
    #[arg(long)]
    pub depth: usize,
    #[arg(long)]
    pub epsilon: Truth,
}

#[derive(Debug, Args)]
pub struct SignatureArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub state: String,
    #[arg(long)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct LocalityArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub formula: String,
    #[arg(long)]
    pub state: String,
    #[arg(long)]
    pub radius: usize,
    #[arg(long)]
    pub fol: bool,
}

/// Failure of a command, mapped to its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input: exit 2.
    Usage(String),
    /// A checked property does not hold: exit 1.
    Failure(String),
}

impl CliError {
    pub fn usage(e: impl ToString) -> CliError {
        CliError::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("failure: {msg}");
            ExitCode::from(1)
        }
    }
}
