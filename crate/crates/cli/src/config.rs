//! Run configuration: JSON file, then command-line overrides, then
//! validation. Nothing is computed before [`RunConfig::validate`] succeeds.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fhharm::construct::Scale;
use fhharm::numeric::{parse_rational, PRECISION};
use fhharm::verify::FitGrid;
use fhharm::{Polynomial, Rational, Radius};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DenseConfig {
    pub coefficient_height: u64,
    pub degree_cap: u32,
    /// Explicit generating set, cycled; replaces the default enumeration.
    pub generators: Option<Vec<String>>,
}

impl Default for DenseConfig {
    fn default() -> Self {
        DenseConfig {
            coefficient_height: 2,
            degree_cap: 2,
            generators: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NMaxPolicy {
    /// Smallest truncation index considered.
    pub floor: u64,
    /// Use exactly this index instead of the tail policy.
    pub fixed: Option<u64>,
}

impl Default for NMaxPolicy {
    fn default() -> Self {
        NMaxPolicy { floor: 120, fixed: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadiusGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Default for RadiusGrid {
    fn default() -> Self {
        RadiusGrid { lo: 0.5, hi: 50.0, count: 50 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "C")]
    pub c: String,
    pub mode: Scale,
    pub k_max: u64,
    pub dense: DenseConfig,
    /// Relaxed scale only: explicit `ℓ_k` and block threshold.
    pub ells: Option<Vec<u64>>,
    pub threshold: Option<u64>,
    /// Literal scale: use this growth-lemma constant instead of fitting one.
    pub c_prime: Option<String>,
    pub fit_grid: FitGrid,
    pub n_max: NMaxPolicy,
    pub radii: RadiusGrid,
    pub precision: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 3,
            c: "1".into(),
            mode: Scale::Literal,
            k_max: 10,
            dense: DenseConfig::default(),
            ells: None,
            threshold: None,
            c_prime: None,
            fit_grid: FitGrid::default(),
            n_max: NMaxPolicy::default(),
            radii: RadiusGrid::default(),
            precision: PRECISION,
            output: None,
            format: Format::Json,
            seed: 20240611,
            samples: 2048,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        use anyhow::ensure;
        ensure!(self.n >= 2, "N must be at least 2, got {}", self.n);
        ensure!(self.c_value()?.numer() > &0.into(), "C must be positive");
        ensure!(
            self.precision == PRECISION,
            "precision is fixed at {PRECISION} bits, got {}",
            self.precision
        );
        ensure!(self.dense.coefficient_height >= 1, "dense.coefficient_height must be at least 1");
        if let Some(gens) = &self.dense.generators {
            for g in gens {
                let p = Polynomial::parse(g, Some(self.n))?;
                ensure!(p.is_harmonic(), "generator {g:?} is not harmonic");
            }
        }
        match self.mode {
            Scale::Literal => {
                ensure!(self.ells.is_none(), "explicit ells are only allowed on the relaxed scale");
                ensure!(self.threshold.is_none(), "threshold is only adjustable on the relaxed scale");
            }
            Scale::Relaxed => {
                ensure!(self.c_prime.is_none(), "c_prime only applies to the literal scale");
                if let Some(e) = &self.ells {
                    ensure!(e.len() as u64 >= self.k_max, "ells has {} entries, k_max is {}", e.len(), self.k_max);
                }
                ensure!(self.threshold != Some(0), "threshold must be positive");
            }
        }
        if let Some(cp) = &self.c_prime {
            ensure!(parse_rational(cp)?.numer() > &0.into(), "c_prime must be positive");
        }
        let g = &self.radii;
        ensure!(g.lo > 0.0 && g.hi >= g.lo && g.hi.is_finite(), "radius grid needs 0 < lo <= hi");
        ensure!(g.count >= 1, "radius grid needs at least one point");
        ensure!(self.samples >= 1, "samples must be positive");
        let f = &self.fit_grid;
        ensure!(!f.dims.is_empty() && f.dims.iter().all(|&d| d >= 2), "fit_grid.dims must be nonempty, each >= 2");
        ensure!(f.ell_max >= 1 && f.r_points >= 2 && f.r_min > 0.0 && f.r_max > f.r_min, "fit_grid is degenerate");
        ensure!(f.safety >= 1.0, "fit_grid.safety must be at least 1");
        Ok(())
    }

    pub fn c_value(&self) -> anyhow::Result<Rational> {
        Ok(parse_rational(&self.c)?)
    }

    pub fn generators(&self) -> anyhow::Result<Option<Vec<Polynomial>>> {
        self.dense
            .generators
            .as_ref()
            .map(|g| g.iter().map(|s| Ok(Polynomial::parse(s, Some(self.n))?)).collect())
            .transpose()
    }

    pub fn radii(&self) -> anyhow::Result<Vec<Radius>> {
        Ok(fhharm::verify::log_spaced_radii(self.radii.lo, self.radii.hi, self.radii.count)?)
    }

    pub fn block_threshold(&self) -> u64 {
        match self.mode {
            Scale::Literal => fhharm::construct::LITERAL_THRESHOLD,
            Scale::Relaxed => self.threshold.unwrap_or(1),
        }
    }
}
