//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "tourney", version, about = "Exact and simulated analysis of matchplay tournaments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact win vector of a tournament at a match matrix.
    Eval {
        #[command(flatten)]
        subject: SubjectArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo estimate of the win vector.
    Simulate {
        #[command(flatten)]
        subject: SubjectArgs,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Also compute the exact vector and report the largest gap.
        #[arg(long)]
        compare_exact: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Corner vectors of the achievable polytope.
    Corners {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Every greedy-feasible digraph and its graph vector.
    Digraphs {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Is a vector in the polytope? Answers with a witness or a certificate.
    Member {
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated rationals, e.g. "1/3,1/2,1/6".
        #[arg(long)]
        x: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Runs property checks over the seeded sample set; exit 1 on failure.
    Check {
        #[command(flatten)]
        subject: SubjectArgs,
        /// Properties to check; defaults to symmetry, honesty and fairness
        /// (plus rounds-honesty for rounds tournaments).
        #[arg(long = "property", value_enum)]
        properties: Vec<Property>,
        /// Seed of the sample set; the shipped default is used when absent.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Optimizes a linear objective over symmetric honest maps on the grid of
    /// a matrix.
    ProbeMap {
        #[arg(long)]
        matrix: String,
        /// Comma-separated weights on the win vector at the input matrix.
        #[arg(long)]
        objective: String,
        #[arg(long, value_enum, default_value_t = Goal::Max)]
        sense: Goal,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Permutations grouped by greedy digraph, with graph vectors.
    Table1 {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SubjectArgs {
    #[arg(long, value_enum)]
    pub tournament: TournamentName,
    /// Number of players.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of repetitions (matches per pair, or round-robins).
    #[arg(long = "N")]
    pub iterations: Option<usize>,
    /// Match matrix: a JSON file path, or `pstar` / `uniform`.
    #[arg(long)]
    pub matrix: Option<String>,
    /// Digraph JSON file for `graph`.
    #[arg(long)]
    pub digraph: Option<PathBuf>,
    /// Permutation (1-based, comma-separated) whose greedy digraph `graph` uses.
    #[arg(long, conflicts_with = "digraph")]
    pub sigma: Option<String>,
    /// Parameter matrix JSON file for `graph`; a default is built otherwise.
    #[arg(long)]
    pub parameter: Option<PathBuf>,
    /// Map realized by `map`.
    #[arg(long, value_enum, default_value_t = MapName::H)]
    pub map: MapName,
    /// Matches per pair of the tournament behind an induced map.
    #[arg(long = "inner-N", default_value_t = 2)]
    pub inner_iterations: usize,
    /// Mixes the map with `h` at this weight.
    #[arg(long)]
    pub strictify: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum TournamentName {
    T1,
    T2,
    RrMax,
    RrMinCoin,
    Uniform,
    SingleElim,
    Map,
    Graph,
    RoundsExample,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapName {
    /// The strictly honest average-score map.
    H,
    /// Induced by t1.
    T1,
    /// Induced by t2.
    T2,
    /// Constant uniform vector.
    Uniform,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Symmetry,
    Honesty,
    StrictHonesty,
    Fairness,
    Futility,
    RoundsHonesty,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Max,
    Min,
}
