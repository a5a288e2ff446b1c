//! `fhharm`: build plans, run the verification suites, emit JSON or CSV.
//!
//! Exit status: 0 when every asserted inequality holds, 1 when one fails,
//! 2 for invalid input or a computation that could not be certified.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{Format, RunConfig};
use fhharm::construct::Scale;

/// Worker threads for the parallel loops; unset means one per core.
pub const THREADS_ENV: &str = "FHHARM_THREADS";

#[derive(Parser, Debug)]
#[command(name = "fhharm", version, about = "Frequently hypercyclic harmonic functions: construction and checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// JSON run configuration; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Use the relaxed (debug) scale.
    #[arg(long, global = true)]
    relaxed: bool,
    /// Human-readable output instead of JSON/CSV.
    #[arg(long, global = true)]
    pretty: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Ambient dimension.
    #[arg(long = "N", global = true)]
    n: Option<usize>,
    /// Growth constant `C`.
    #[arg(long = "C", global = true)]
    c: Option<String>,
    #[arg(long, global = true)]
    k_max: Option<u64>,
    /// Growth-lemma constant for the literal scale; fitted when absent.
    #[arg(long, global = true)]
    c_prime: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase", tag = "command")]
pub enum Command {
    /// The axial harmonic `I_{m,N}`.
    Axial {
        #[arg(long)]
        m: u32,
    },
    /// Kuran parts of each homogeneous component of a harmonic polynomial.
    Decompose {
        #[arg(long = "H")]
        h: String,
    },
    /// The primitive `P_k(H)`.
    Primitive {
        #[arg(long = "H")]
        h: String,
        #[arg(long)]
        k: u32,
    },
    /// Build the dense sequence and `ℓ_k`, print the plan file.
    Plan,
    /// Lower-density count of `B_k` up to a horizon.
    Density {
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 5)]
        ell: u64,
        #[arg(long = "T", default_value_t = 100_000_000)]
        t: u64,
        /// Block threshold; defaults to the scale's.
        #[arg(long)]
        threshold: Option<u64>,
        /// Also report the ratio at this many block-boundary horizons and
        /// assert that it is nondecreasing.
        #[arg(long, default_value_t = 0)]
        boundaries: usize,
    },
    /// Residual `M_2²(∂^s h − F_k, r)` over `B_{n,k}` (or one `s`).
    Residual {
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Defaults to the smallest admissible `n` for `k`.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long, default_value = "4/5")]
        r: String,
    },
    /// `M_2(h, r) r^{N/2−3/4} / (C e^r)` over the configured radius grid.
    Growth {
        /// Radii (rationals, comma separated) to re-evaluate exactly.
        #[arg(long, value_delimiter = ',')]
        exact_at: Vec<String>,
    },
    /// Growth-lemma fit, skip inequality, log-concavity and Poisson checks.
    Lemmas {
        /// Leave out the growth-lemma fit (the slowest part).
        #[arg(long)]
        no_fit: bool,
        /// Random polynomials for the Poisson check.
        #[arg(long, default_value_t = 100)]
        poisson_corpus: usize,
    },
    /// Relaxed-scale oracle suite: every block-calculus value against full
    /// expansion.
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Axial { .. } => "axial",
            Command::Decompose { .. } => "decompose",
            Command::Primitive { .. } => "primitive",
            Command::Plan => "plan",
            Command::Density { .. } => "density",
            Command::Residual { .. } => "residual",
            Command::Growth { .. } => "growth",
            Command::Lemmas { .. } => "lemmas",
            Command::Selftest => "selftest",
        }
    }
}

fn resolve_config(g: &Global) -> anyhow::Result<RunConfig> {
    let mut c = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if g.relaxed {
        c.mode = Scale::Relaxed;
    }
    if let Some(f) = g.format {
        c.format = f;
    }
    if let Some(o) = &g.out {
        c.output = Some(o.clone());
    }
    if let Some(n) = g.n {
        c.n = n;
    }
    if let Some(v) = &g.c {
        c.c = v.clone();
    }
    if let Some(k) = g.k_max {
        c.k_max = k;
    }
    if let Some(v) = &g.c_prime {
        c.c_prime = Some(v.clone());
    }
    if let Some(s) = g.seed {
        c.seed = s;
    }
    c.validate()?;
    Ok(c)
}

fn threads_from_env() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
        anyhow::ensure!(n > 0, "{THREADS_ENV} must be positive");
        fhharm::exec::configure_threads(n);
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    threads_from_env()?;
    let config = resolve_config(&cli.global)?;
    let output = commands::run(&cli.command, &config)?;
    let text = output.render(&cli.command, &config, cli.global.pretty)?;
    match &config.output {
        Some(p) => std::fs::write(p, text.as_bytes())?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    if let Some(false) = output.passed {
        eprintln!("fhharm {}: an asserted inequality failed", cli.command.name());
    }
    Ok(output.passed != Some(false))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
