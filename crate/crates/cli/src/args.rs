use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "wsm",
    version,
    about = "Weight sampling, weighted sum solves and adaptive front search",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a batch of weight vectors as CSV.
    Sample(SampleArgs),
    /// Solve a problem instance for a batch of weights and report the front.
    Solve(SolveArgs),
    /// Run the adaptive refinement search on a problem instance.
    Adapt(AdaptArgs),
    /// Distribution and growth diagnostics.
    #[command(subcommand)]
    Diag(DiagCommand),
    /// Re-run the command recorded in an output file's header.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleStrategy {
    Uniform,
    Random,
    Dirichlet,
    Lhs,
    Slhs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct WeightFlags {
    /// Number of objectives.
    #[arg(long)]
    pub p: Option<usize>,
    /// Number of subintervals (lattice resolution for `uniform`).
    #[arg(long)]
    pub d: Option<usize>,
    /// Repetitions of the Latin hypercube design.
    #[arg(long)]
    pub s: Option<usize>,
    /// Number of random draws.
    #[arg(long)]
    pub n: Option<usize>,
    /// Admissible deviation of the midpoint sum from 1 (slhs, p >= 3).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Dirichlet concentration, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Cap on the number of generated vectors.
    #[arg(long)]
    pub budget: Option<u64>,
}

impl WeightFlags {
    pub fn any_set(&self) -> bool {
        self.p.is_some()
            || self.d.is_some()
            || self.s.is_some()
            || self.n.is_some()
            || self.delta.is_some()
            || self.alpha.is_some()
            || self.budget.is_some()
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(value_enum)]
    pub strategy: SampleStrategy,
    #[command(flatten)]
    pub flags: WeightFlags,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Problem instance (JSON).
    #[arg(long)]
    pub instance: PathBuf,
    /// Weights CSV, e.g. the output of `wsm sample`.
    #[arg(
        long,
        conflicts_with = "strategy",
        required_unless_present = "strategy"
    )]
    pub weights: Option<PathBuf>,
    /// Generate weights inline with this strategy.
    #[arg(long, value_enum)]
    pub strategy: Option<SampleStrategy>,
    #[command(flatten)]
    pub flags: WeightFlags,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the solves.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AdaptArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Initial lattice resolution and split factor.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Minimum image gap that triggers a split.
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    /// Stop once a round's distinct-to-solved ratio falls below this.
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
    #[arg(long, default_value_t = wsm::domain::DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,
    /// Cap on the total number of solves.
    #[arg(long, default_value_t = wsm::domain::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON-lines log of every solve.
    #[arg(long)]
    pub audit: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DiagCommand {
    /// Normal Q-Q data for bi-objective LHS weights.
    Qq(QqArgs),
    /// Size of the uniform-increment lattice over a grid of p and d.
    Growth(GrowthArgs),
}

#[derive(Debug, Args)]
pub struct QqArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    /// List such as `2,3,4,5` or range such as `2..5`.
    #[arg(long)]
    pub p: String,
    /// List such as `1,2,4` or range such as `1..25`.
    #[arg(long)]
    pub d: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// A file written by an earlier run.
    pub file: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub audit: Option<PathBuf>,
}

/// Parse `a..b` (inclusive), `a..=b`, or a comma-separated list.
pub fn parse_int_set(text: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("expected a list like 1,2,3 or a range like 1..25, got {text:?}");
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_sets() {
        assert_eq!(parse_int_set("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_int_set("1..=2").unwrap(), vec![1, 2]);
        assert_eq!(parse_int_set("2,3, 5").unwrap(), vec![2, 3, 5]);
        assert!(parse_int_set("5..1").is_err());
        assert!(parse_int_set("a").is_err());
        assert!(parse_int_set("").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
