use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use sidon_core::random_lab::EstimateMode;

/// Sidon sets in the grid [n]^d: verification, exact search and counting,
/// collision graphs, constructions and random-subset experiments.
///
/// Exit status: 0 success or affirmative answer, 1 negative finding,
/// 2 usage or parse error, 3 budget or size limit reached.
#[derive(Parser, Debug)]
#[command(name = "sidonlab", version, propagate_version = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// RNG seed; randomized commands generate and print one when absent.
    #[arg(long, global = true, env = "SIDONLAB_SEED")]
    pub seed: Option<u64>,
    /// Worker threads (0 = one per core). Results do not depend on it.
    #[arg(long, global = true, env = "SIDONLAB_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Output file; stdout when absent. A `<out>.config.json` sidecar records
    /// the resolved configuration.
    #[arg(long, global = true, env = "SIDONLAB_OUT")]
    pub out: Option<PathBuf>,
    /// Output format; each command lists the formats it accepts.
    #[arg(long, global = true, env = "SIDONLAB_FORMAT")]
    pub format: Option<Format>,
    /// Search node budget (0 = unlimited); the node guard for `count`.
    #[arg(long, global = true, env = "SIDONLAB_BUDGET")]
    pub budget: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    /// Point list or edge list.
    Text,
    Dimacs,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct GridArgs {
    /// Side length of the grid [n]^d.
    #[arg(short = 'n', long = "n", env = "SIDONLAB_N")]
    pub n: u64,
    /// Dimension.
    #[arg(short = 'd', long = "d", env = "SIDONLAB_D", default_value_t = 1)]
    pub d: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check whether a point file is a Sidon set (exit 0 yes, 1 no).
    Verify {
        /// Point file (`n=… d=…` header and one point per line) or rank JSON.
        file: PathBuf,
    },
    /// Maximum Sidon subset of [n]^d, or of the points in --within.
    SearchMax {
        #[command(flatten)]
        grid: GridArgs,
        /// Restrict the search to the points of this file.
        #[arg(long)]
        within: Option<PathBuf>,
    },
    /// Number of Sidon subsets of [n]^d by size (CSV `t,count`; total on stderr).
    Count {
        #[command(flatten)]
        grid: GridArgs,
        /// Count only sets of this size.
        #[arg(long, env = "SIDONLAB_T")]
        t: Option<usize>,
    },
    /// Explicit dense Sidon set in [n]^d, or a Singer difference set.
    Construct {
        #[arg(short = 'n', long = "n", env = "SIDONLAB_N", required_unless_present = "singer")]
        n: Option<u64>,
        #[arg(short = 'd', long = "d", env = "SIDONLAB_D", default_value_t = 1)]
        d: u32,
        /// Prime order q: print the perfect difference set mod q²+q+1.
        #[arg(long, conflicts_with = "n")]
        singer: Option<u64>,
    },
    /// Collision graph of a Sidon seed set, and checks on it.
    Graph {
        /// Seed point file.
        file: PathBuf,
        /// Check the edge-density inequality instead of printing the graph.
        #[arg(long)]
        density: bool,
        /// Random vertex subsets checked when the graph is too large for an
        /// exhaustive check.
        #[arg(long, default_value_t = 10_000, env = "SIDONLAB_SAMPLES")]
        samples: u64,
        /// Count independent sets of this size (at most 30 vertices).
        #[arg(long)]
        independent: Option<usize>,
    },
    /// Closed-form upper bounds on the number of Sidon sets.
    Bound {
        #[command(subcommand)]
        which: BoundCommand,
    },
    /// Sample [n]^d_p and estimate the maximum Sidon subset of each sample.
    #[command(group(ArgGroup::new("prob").required(true).args(["a", "p"])))]
    RandomRun {
        /// Side lengths, comma separated.
        #[arg(short = 'n', long = "n", env = "SIDONLAB_N", value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(short = 'd', long = "d", env = "SIDONLAB_D", default_value_t = 1)]
        d: u32,
        /// Exponent with p = n^a, -d < a ≤ 0.
        #[arg(long, env = "SIDONLAB_A", allow_negative_numbers = true)]
        a: Option<f64>,
        /// Inclusion probability in (0, 1].
        #[arg(long, env = "SIDONLAB_P")]
        p: Option<f64>,
        #[arg(long, env = "SIDONLAB_TRIALS", default_value_t = 32)]
        trials: u64,
        #[arg(long, env = "SIDONLAB_MODE", default_value = "auto", value_parser = parse_mode)]
        mode: EstimateMode,
        /// Fill the elapsed_s column (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Fit the growth exponent of F from a random-run record file.
    FitExponent {
        /// Records as CSV or JSON lines.
        file: PathBuf,
        /// Emit the (a, b_hat, b_predicted) curve, one row per exponent.
        #[arg(long)]
        curve: bool,
    },
    /// Empirical tail frequency of |R| against the Chernoff ceiling.
    Chernoff {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, env = "SIDONLAB_P")]
        p: f64,
        #[arg(long, env = "SIDONLAB_LAMBDA")]
        lambda: f64,
        #[arg(long, env = "SIDONLAB_TRIALS", default_value_t = 10_000)]
        trials: u64,
    },
    /// Compare F on coupled interval and grid samples.
    Transfer {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, env = "SIDONLAB_P")]
        p: f64,
        #[arg(long, env = "SIDONLAB_TRIALS", default_value_t = 100)]
        trials: u64,
    },
    /// Locate p among the growth regimes of F and compare with samples.
    Regime {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, env = "SIDONLAB_P")]
        p: f64,
        #[arg(long, env = "SIDONLAB_TRIALS", default_value_t = 16)]
        trials: u64,
        /// Regime boundary offset; defaults to d/9.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Six envelope constants (lower, upper per regime), comma separated.
        #[arg(long, value_delimiter = ',', num_args = 6)]
        constants: Option<Vec<f64>>,
        #[arg(long, default_value = "auto", value_parser = parse_mode)]
        mode: EstimateMode,
    },
    /// Print the manual page (roff).
    #[command(hide = true)]
    Manpage,
}

#[derive(Subcommand, Debug)]
pub enum BoundCommand {
    /// log2 bound on Z(t) for t ≥ 2·s0.
    Large {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(short = 't', long = "t", env = "SIDONLAB_T")]
        t: f64,
    },
    /// log2 bound on Z(t) at t = ω·s*.
    Small {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 4.0)]
        omega: f64,
    },
    /// log2 of the sum of C(n^d, t) over t ≤ n^{d/3} ln n.
    SmallT {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Doubling schedule from a seed of size s0 to t.
    Schedule {
        #[arg(short = 't', long = "t", env = "SIDONLAB_T")]
        t: f64,
        #[arg(long)]
        s0: f64,
    },
    /// The constant C_ω.
    COmega {
        #[arg(long)]
        omega: f64,
    },
    /// Base of the first-moment bound in the sparse regime.
    SparseBase {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, env = "SIDONLAB_P")]
        p: f64,
        #[arg(long)]
        c: f64,
    },
}

fn parse_mode(s: &str) -> Result<EstimateMode, String> {
    s.parse().map_err(|e: sidon_core::Error| e.to_string())
}
