use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "suptel",
    version,
    about = "Exact checks of the super telescoping identity, its residue cancellation, \
             the lattice models it solves, and the Verblunsky variance identity"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "SUPTEL_FORMAT", default_value = "table")]
    pub format: Format,

    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,

    /// Also render exact results as decimals.
    #[arg(long, global = true)]
    pub approx: bool,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated sums against binom(1/beta + n - 1, n) along a window schedule.
    Verify(VerifyArgs),
    /// Residue sums sum_{S} C_q(S) per pole q, or one reflection pair.
    Residues(ResiduesArgs),
    /// Truncated scalar partition function against (1 - x)^(-1/beta).
    Partition(PartitionArgs),
    /// Prime-species partition function against zeta(beta)^(1/beta).
    Zeta(ZetaArgs),
    /// Draw subsets from the Boltzmann measure, exactly or by Metropolis.
    Sample(SampleArgs),
    /// Moment oracles and Monte Carlo checks of E|x_n|^2 = E|xhat_n|^2.
    Moments(MomentsArgs),
    /// Taylor coefficients of (1 - x)^(-1/beta).
    Gf(GfArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: u64,
    /// Rational p/q.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// Increasing window schedule, comma separated.
    #[arg(long = "M", value_delimiter = ',', required = true)]
    pub windows: Vec<u64>,
    /// Tolerance on the last error (decimal or p/q). Defaults to 2/M_final for n <= 1.
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Debug, Args)]
pub struct ResiduesArgs {
    #[arg(long, required_unless_present = "subset")]
    pub n: Option<u64>,
    #[arg(long = "M")]
    pub window: Option<u64>,
    /// Check one pair instead: the subset in "a-b,c-d" notation.
    #[arg(long, requires = "q")]
    pub subset: Option<String>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Reflection radius; defaults to the lemma choice for the window `--M`.
    #[arg(long)]
    pub d: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// Fugacity x = e^(beta mu) as p/q; several comma separated values give
    /// independent species.
    #[arg(long, value_delimiter = ',', required = true)]
    pub x: Vec<String>,
    #[arg(long = "N")]
    pub max_size: u64,
    #[arg(long = "M")]
    pub window: u64,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    /// Real beta > 1.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Number of prime species K.
    #[arg(long)]
    pub primes: usize,
    #[arg(long = "N", default_value_t = 20)]
    pub max_size: usize,
    #[arg(long = "M", default_value_t = 200)]
    pub window: u64,
    /// Fail (exit 1) when the gap to zeta(beta)^(1/beta) exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long)]
    pub x: String,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// RNG seed; generated and echoed when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Window [0, M]; the exact sampler enlarges it as needed unless --N is set.
    #[arg(long = "M", default_value_t = 64)]
    pub window: u64,
    /// Size cap: sample the truncated law on subsets of [0, M] with |S| <= N.
    #[arg(long = "N")]
    pub max_size: Option<u64>,
    /// Relative truncation deficit allowed per size (exact sampler).
    #[arg(long, default_value_t = 1e-3)]
    pub tail_tol: f64,
    /// Use the Metropolis chain on the truncated law instead.
    #[arg(long)]
    pub mcmc: bool,
    /// Chain length; states are recorded evenly along it.
    #[arg(long)]
    pub steps: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Partition,
    Binomial,
    Xhat,
    Loop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McKind {
    X,
    Xhat,
    Szego,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// Exact oracles to evaluate (default: partition and binomial).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub oracle: Vec<Oracle>,
    /// Product length k for the xhat and loop oracles.
    #[arg(long, default_value_t = 8)]
    pub k: u64,
    /// Monte Carlo check to run.
    #[arg(long, value_enum)]
    pub mc: Option<McKind>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fixed product length for `--mc xhat` (default: chosen from the exact tail).
    #[arg(long)]
    pub k_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GfArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long = "N")]
    pub degree: usize,
}
