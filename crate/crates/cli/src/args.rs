use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tracefn_core::thresholds::DEFAULT_SEED;

/// Numerical experiments with trace functions over prime fields.
#[derive(Debug, Parser)]
#[command(name = "tracefn-lab", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "TRACEFN_LAB_THREADS")]
    pub threads: Option<usize>,

    /// Seed for randomized inputs (decimal or 0x-prefixed hex).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    pub seed: u64,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub out: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AngleFamily {
    Kl2,
    Salie,
    Birch,
    Gauss,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every exact-identity suite at a prime.
    Identities {
        #[arg(long)]
        q: u64,
    },
    /// Weil/Deligne sup-norm bounds and Pólya–Vinogradov ratios at a prime.
    Bounds {
        #[arg(long)]
        q: u64,
        /// Families: kl2, kl3, ..., legendre, chi:<m>, inverse, kloosterman-phase.
        #[arg(long, value_delimiter = ',', default_value = "kl2,legendre,inverse")]
        family: Vec<String>,
    },
    /// Angle samples, moments and Kolmogorov–Smirnov distances.
    Satotate {
        #[arg(long, value_enum)]
        family: AngleFamily,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
    },
    /// q-van der Corput sums for the Kl₂ components of Kl₂(·; pq).
    Vdc {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Lengths N; defaults to ⌊(pq)^{2/3}⌋.
        #[arg(long = "N-grid", alias = "n-grid", value_delimiter = ',')]
        n_grid: Vec<f64>,
    },
    /// Complete character sums over shifted products.
    Burgess {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        l: usize,
        /// Shifts range over the box [B, 2B).
        #[arg(long = "B", alias = "b")]
        big_b: i64,
        /// Character index; all nontrivial characters when omitted.
        #[arg(long = "char")]
        character: Option<u64>,
        /// Sweep [0, 2B) instead of [B, 2B).
        #[arg(long)]
        from_zero: bool,
    },
    /// Type I sums through the +ab shift.
    Abshift {
        #[arg(long, default_value = "kloosterman-phase")]
        family: String,
        #[arg(long)]
        q: u64,
        #[arg(long = "M", alias = "m")]
        m: u64,
        #[arg(long = "N", alias = "n")]
        n: f64,
        #[arg(long, default_value_t = 2)]
        l: u32,
    },
    /// Divisor functions in arithmetic progressions.
    Dap {
        #[arg(long)]
        k: u32,
        #[arg(long = "X", alias = "x")]
        x: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
    },
    /// Sums of trace functions over primes.
    Primesum {
        #[arg(long, default_value = "kl2")]
        family: String,
        #[arg(long)]
        q: u64,
        #[arg(long = "X", alias = "x")]
        x: u64,
    },
    /// Regenerate entries of the calibration manifest.
    Calibrate {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        /// Override the declared grid.
        #[arg(long = "q-grid", value_delimiter = ',')]
        q_grid: Vec<u64>,
        /// Manifest to update; the bundled one is the starting point when absent.
        #[arg(long)]
        manifest: PathBuf,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    r.map_err(|e| format!("invalid seed {s}: {e}"))
}
