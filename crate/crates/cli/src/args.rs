use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use groupwalk_core::walk::Mode;

#[derive(Parser)]
#[command(name = "groupwalk", version, about = "Return probabilities of random walks on groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Convolution powers on discrete groups
    #[command(subcommand)]
    Walk(WalkCommand),
    /// Trace inequalities on random symmetric matrices
    #[command(subcommand)]
    Trace(TraceCommand),
    /// The group sol(F_q((t)))
    #[command(subcommand)]
    Sol(SolCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Master seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Clone)]
pub struct WalkArgs {
    /// `z:d`, `free:k` or `lamplighter:q`
    #[arg(long)]
    pub group: String,
    /// `srw`, `lazy:p`, `uniform-ball:r` or `custom:@file`
    #[arg(long, default_value = "srw")]
    pub measure: String,
    #[arg(long, value_parser = parse_mode, default_value = "exact")]
    pub mode: Mode,
    /// Cap on the support size of a convolution power
    #[arg(long, default_value_t = groupwalk_core::walk::DEFAULT_SUPPORT_BUDGET)]
    pub budget: usize,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse::<Mode>().map_err(|_| format!("unknown mode `{s}` (expected exact or float)"))
}

#[derive(Subcommand)]
pub enum WalkCommand {
    /// Return series a_n with spectral diagnostics
    Return {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Use the radial recursion (free groups with the SRW only)
        #[arg(long)]
        radial: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Both expressions of the Dirichlet form on random test functions
    Dirichlet {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Test functions are supported in this word ball
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Comparison constant between the Dirichlet forms of two measures
    Compare {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        measure2: String,
        /// Symmetric set U, elements separated by `;` (default: standard generators and e)
        #[arg(long)]
        u: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 16)]
        radius_cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Stability search between two return series
    Stability {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        measure2: String,
        /// Group of the second measure (default: same group)
        #[arg(long)]
        group2: Option<String>,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        b_max: usize,
        #[arg(long, default_value_t = 1e6)]
        a_max: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Polynomial, stretched-exponential and exponential decay fits
    Fit {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long)]
        radial: bool,
        /// First index of the fit window (default n/2)
        #[arg(long)]
        lo: Option<usize>,
        #[arg(long)]
        hi: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
pub enum TraceCommand {
    /// Monotonicity of τ(h(·)) for step-like h on ordered pairs
    Prop2 {
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 10)]
        specs: usize,
        #[arg(long, default_value_t = 2)]
        dim_min: usize,
        #[arg(long, default_value_t = 30)]
        dim_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Scalar inequalities on a grid of (c, t)
    Lemma2 {
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        /// Comma-separated values of c in (0, 1)
        #[arg(long, default_value = "0.05,0.2,0.5,0.8,0.95")]
        cs: String,
        /// Comma-separated values of t >= 1
        #[arg(long, default_value = "1,2,5,10,40")]
        ts: String,
        #[command(flatten)]
        common: Common,
    },
    /// The chain of trace inequalities on random instances
    Thm1 {
        #[arg(long, default_value_t = 500)]
        instances: usize,
        #[arg(long, default_value_t = 2)]
        dim_min: usize,
        #[arg(long, default_value_t = 30)]
        dim_max: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
pub enum SolCommand {
    /// Lower bound on the return density from confined projected walks
    LowerBound {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 1024)]
        tmin: u64,
        /// Largest t; t runs over powers of two from tmin
        #[arg(long, default_value_t = 1 << 20)]
        tmax: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo estimate of P(Z_2t in the box of size n)
    Mc {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 64)]
        t: u64,
        /// Box size (default: the maximizer of the lower bound at t)
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Confined prefixes of random words stay in the box
    Lemma3 {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long, default_value_t = 50)]
        length: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
}
