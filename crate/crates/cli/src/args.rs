//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coopinfo::ModeKind;

#[derive(Debug, Parser)]
#[command(name = "coopgame", version, about = "Analyse and construct cooperative games")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    pub json: bool,
    /// Arithmetic used for game analyses.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Comparison tolerance for float analyses.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Rational,
    Float,
}

impl From<ModeArg> for ModeKind {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Rational => ModeKind::Rational,
            ModeArg::Float => ModeKind::Float,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Balancedness, modularity, Shapley value, exactness and large core.
    Analyze { game: PathBuf },
    /// Build a game from a distribution, channel or profile.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        input: PathBuf,
        /// Write the game file here instead of standard output.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Sample size for `degame` (overrides the input file).
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Prefix-robust allocation of a joint pmf or a power profile.
    Robust { input: PathBuf },
    /// Core point below a per-player ceiling.
    Tolerance {
        game: PathBuf,
        /// Comma-separated ceiling, e.g. `1,2,3/2`.
        #[arg(long = "T", value_name = "A,B,C", allow_hyphen_values = true)]
        ceiling: String,
    },
    /// XOS representation of a balanced monotone resource game.
    Xos { game: PathBuf },
    /// Fractional entropy-power inequality for Gaussian vectors.
    EpiCheck {
        gaussian: PathBuf,
        /// Fractional partition file (conjecture mode).
        #[arg(long, conflicts_with = "uniform_degree")]
        partition: Option<PathBuf>,
        /// Leave-one-out collection with weight 1/r₊ (the default).
        #[arg(long)]
        uniform_degree: bool,
    },
    /// Least favourable pair of two capacities.
    Lfp {
        u: PathBuf,
        v: PathBuf,
        /// Minimise D(Q ‖ P) instead of D(P ‖ Q).
        #[arg(long)]
        reverse: bool,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Checks that likelihood-ratio tests of the least favourable pair are
    /// minimax among randomized tests on a grid.
    LrCheck {
        u: PathBuf,
        v: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Allowed gap above the enumerated envelope.
        #[arg(long, default_value_t = 0.02)]
        gap: f64,
    },
    /// Minimal balanced collections on n players.
    Mbc { n: usize },
    /// Seeded randomized searches for counterexamples.
    Search {
        #[arg(value_enum)]
        kind: SearchKind,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Sw,
    Swmod,
    Dmmac,
    Gmac,
    La,
    Esum,
    Epower,
    Shifted,
    Degame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    /// Multiple-access games that are not submodular.
    LaNonconcave,
    /// Multiple-access games whose Shapley value leaves the core.
    LaShapley,
    /// Balanced three-player cost games without a large core.
    BalancedNotLarge,
}
