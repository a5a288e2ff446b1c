//! Numerical checks of the auxiliary lemmas: the growth-rate series, the
//! sparse-sampling ("skip") inequality, log-concavity of the series terms and
//! the Poisson sup bound.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numeric::{
    consts, factorial, float_from_bigint, float_from_f64, float_to_f64, pow_rational, rational_to_text, NormValue,
    Rational, PRECISION, RM,
};
use crate::polycalc::Polynomial;
use crate::spheremeans::{m2_mean_squared, sup_on_sphere, Radius};

const LN2: f64 = std::f64::consts::LN_2;

/// Stop once the next term is below `2^-80` of the running sum and the term
/// ratio is below `1/2`.
const TRUNCATION_LOG2: f64 = -80.0;

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(r^{2n} / (n!² (n+1)^{N−2}))` in log-space.
pub fn ln_series_term(n_dim: usize, n: u64, r: f64) -> f64 {
    let nf = n as f64;
    2.0 * nf * r.ln() - 2.0 * ln_gamma(nf + 1.0) - (n_dim as f64 - 2.0) * (nf + 1.0).ln()
}

/// One evaluation of `S(ℓ, u, r) · ℓ · r^{N−3/2} / e^{2r}`.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthLemmaValue {
    #[serde(rename = "N")]
    pub n: usize,
    pub ell: u64,
    pub u: u64,
    pub r: f64,
    /// `ln S(ℓ, u, r)`.
    pub ln_sum: f64,
    pub normalized: f64,
    pub terms: usize,
}

/// `S(ℓ, u, r) = Σ_{k ≥ ℓ} r^{2(ℓk+u)}/((ℓk+u)!² (ℓk+u+1)^{N−2})`, with a
/// certified truncation.
pub fn growth_lemma_series(n_dim: usize, ell: u64, u: u64, r: f64, max_terms: usize) -> Result<GrowthLemmaValue> {
    if ell == 0 || u >= ell {
        return Err(Error::InvalidArgument(format!("need 0 <= u < ell, got u = {u}, ell = {ell}")));
    }
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidRadius(format!("{r}")));
    }
    let mut ln_sum = f64::NEG_INFINITY;
    let mut k = ell;
    let mut cur = ln_series_term(n_dim, ell * k + u, r);
    for used in 1..=max_terms {
        ln_sum = log_add(ln_sum, cur);
        k += 1;
        let next = ln_series_term(n_dim, ell * k + u, r);
        if next - ln_sum < TRUNCATION_LOG2 * LN2 && next - cur < -LN2 {
            let norm = ln_sum + (ell as f64).ln() + (n_dim as f64 - 1.5) * r.ln() - 2.0 * r;
            return Ok(GrowthLemmaValue {
                n: n_dim,
                ell,
                u,
                r,
                ln_sum,
                normalized: norm.exp(),
                terms: used,
            });
        }
        cur = next;
    }
    Err(Error::TruncationNotCertified { terms: max_terms })
}

/// Max over `r_grid` of the normalized series; this is the fitted constant for
/// one `(N, ℓ, u)`.
pub fn growth_lemma_check(n_dim: usize, ell: u64, u: u64, r_grid: &[f64], terms: usize) -> Result<GrowthLemmaValue> {
    let mut best: Option<GrowthLemmaValue> = None;
    for &r in r_grid {
        let v = growth_lemma_series(n_dim, ell, u, r, terms)?;
        if best.as_ref().is_none_or(|b| v.normalized > b.normalized) {
            best = Some(v);
        }
    }
    best.ok_or_else(|| Error::InvalidArgument("empty radius grid".into()))
}

/// The documented fitting grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitGrid {
    pub dims: Vec<usize>,
    pub ell_max: u64,
    pub r_min: f64,
    pub r_max: f64,
    pub r_points: usize,
    pub safety: f64,
    pub terms: usize,
}

impl Default for FitGrid {
    fn default() -> Self {
        FitGrid {
            dims: vec![3, 4, 5],
            ell_max: 64,
            r_min: 2.0,
            r_max: 200.0,
            r_points: 48,
            safety: 2.0,
            terms: 100_000,
        }
    }
}

impl FitGrid {
    pub fn radii(&self, points: usize) -> Vec<f64> {
        let (a, b) = (self.r_min.ln(), self.r_max.ln());
        (0..points)
            .map(|i| (a + (b - a) * i as f64 / (points.max(2) - 1) as f64).exp())
            .collect()
    }
}

/// The certified growth-lemma constant and the fits behind it.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthLemmaFit {
    pub grid: FitGrid,
    /// Max over the whole grid.
    pub fitted: f64,
    /// `safety · fitted`, rounded up to a rational.
    #[serde(serialize_with = "ser_rational")]
    pub certified: Rational,
    pub argmax: GrowthLemmaValue,
    /// Fit per `N`, on the full radius grid.
    pub per_dim: Vec<(usize, f64)>,
    /// Fit per `N` on every other radius of the grid.
    pub per_dim_coarse: Vec<(usize, f64)>,
    /// `max/min` over all of the fits above.
    pub stability: f64,
    /// Largest relative deviation of log-space terms from exact big-integer
    /// evaluation at 64 random points.
    pub cross_check_max_rel: f64,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_text(r))
}

impl GrowthLemmaFit {
    pub fn is_stable(&self) -> bool {
        self.stability < 2.0
    }

    pub fn provenance(&self) -> String {
        format!(
            "growth-lemma fit: N in {:?}, ell in 1..={}, u in {{0, ell-1}}, {} log-spaced r in [{}, {}], max = {:.6e}, safety x{}",
            self.grid.dims, self.grid.ell_max, self.grid.r_points, self.grid.r_min, self.grid.r_max, self.fitted, self.grid.safety
        )
    }
}

/// Fits the growth-lemma constant over `grid`, in parallel over `(N, ℓ, u)`.
pub fn fit_growth_constant(grid: &FitGrid, exec: Exec) -> Result<GrowthLemmaFit> {
    let mut cases = Vec::new();
    for &n in &grid.dims {
        for ell in 1..=grid.ell_max {
            cases.push((n, ell, 0));
            if ell > 1 {
                cases.push((n, ell, ell - 1));
            }
        }
    }
    let fine = grid.radii(grid.r_points);
    let coarse: Vec<f64> = fine.iter().step_by(2).copied().collect();
    let fits = exec.try_map(&cases, |&(n, ell, u)| {
        Ok::<_, Error>((
            growth_lemma_check(n, ell, u, &fine, grid.terms)?,
            growth_lemma_check(n, ell, u, &coarse, grid.terms)?,
        ))
    })?;
    let mut per_dim = Vec::new();
    let mut per_dim_coarse = Vec::new();
    for &n in &grid.dims {
        let f = fits.iter().filter(|(a, _)| a.n == n);
        per_dim.push((n, f.clone().map(|(a, _)| a.normalized).fold(0.0, f64::max)));
        per_dim_coarse.push((n, f.map(|(_, b)| b.normalized).fold(0.0, f64::max)));
    }
    let argmax = fits
        .iter()
        .map(|(a, _)| a)
        .max_by(|a, b| a.normalized.total_cmp(&b.normalized))
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("empty grid".into()))?;
    let all: Vec<f64> = per_dim.iter().chain(&per_dim_coarse).map(|x| x.1).collect();
    let hi = all.iter().copied().fold(0.0, f64::max);
    let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
    let fitted = argmax.normalized;
    let certified = crate::numeric::rational_upper_bound(fitted * grid.safety);
    Ok(GrowthLemmaFit {
        grid: grid.clone(),
        fitted,
        certified,
        argmax,
        per_dim,
        per_dim_coarse,
        stability: hi / lo,
        cross_check_max_rel: series_term_cross_check(0x5eed, 64),
    })
}

/// Compares log-space terms with 256-bit evaluation from exact factorials at
/// `count` random `(N, n, r)`; returns the largest relative deviation.
pub fn series_term_cross_check(seed: u64, count: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cc = consts();
    let mut worst = 0.0f64;
    for _ in 0..count {
        let n_dim = rng.gen_range(2..=6usize);
        let n = rng.gen_range(0..=400u64);
        let r = rng.gen_range(0.5..200.0f64);
        let rb = float_from_f64(r);
        let num = rb.powi(2 * n as usize, PRECISION, RM);
        let f = float_from_bigint(&factorial(n).into());
        let poly = float_from_bigint(&BigUint::from(n + 1).pow(n_dim as u32 - 2).into());
        let den = f.mul(&f, PRECISION, RM).mul(&poly, PRECISION, RM);
        let exact = num.div(&den, PRECISION, RM);
        let ln_exact = float_to_f64(&exact.ln(PRECISION, RM, &mut cc));
        let ln_fast = ln_series_term(n_dim, n, r);
        let rel = ((ln_fast - ln_exact).exp() - 1.0).abs();
        worst = worst.max(rel);
    }
    worst
}

/// The comparison series `Σ r^{2n}/n!²` against `e^{2r}/r^{1/2}`, and its
/// largest term against `e^{2r}/r`.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub r: f64,
    /// `Σ_n r^{2n}/n!² · r^{1/2}/e^{2r}`.
    pub sum_normalized: f64,
    /// `max_n r^{2n}/n!² · r/e^{2r}`.
    pub max_term_normalized: f64,
    pub argmax: u64,
}

pub fn comparison_series_check(r_grid: &[f64], max_terms: usize) -> Result<Vec<ComparisonRow>> {
    r_grid
        .iter()
        .map(|&r| {
            let v = growth_lemma_series(2, 1, 0, r, max_terms)?;
            // the k ≥ ℓ sum starts at n = 1; add the n = 0 term
            let ln_sum = log_add(v.ln_sum, 0.0);
            let mut best = (0u64, 0.0f64);
            let mut n = 0u64;
            loop {
                let t = ln_series_term(2, n, r);
                if t < best.1 && n > r as u64 + 1 {
                    break;
                }
                if t > best.1 || n == 0 {
                    best = (n, t);
                }
                n += 1;
            }
            Ok(ComparisonRow {
                r,
                sum_normalized: (ln_sum + 0.5 * r.ln() - 2.0 * r).exp(),
                max_term_normalized: (best.1 + r.ln() - 2.0 * r).exp(),
                argmax: best.0,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// skip lemma

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Decreasing,
    Unimodal,
}

/// Test sequences with exactly computable sums.
#[derive(Clone, Debug)]
pub enum SkipSequence {
    /// `a_n = q^n`, `0 < q < 1`.
    Geometric(Rational),
    /// Finitely supported `a_0, …, a_K` (zero afterwards).
    Finite { terms: Vec<Rational>, shape: Shape },
}

impl SkipSequence {
    /// `a_n = r^{2n}/n!²` for `n ≤ len − 1`, declared unimodal.
    pub fn bessel_like(r: &Rational, len: usize) -> Self {
        let r2 = r * r;
        let terms = (0..len as u64)
            .map(|n| pow_rational(&r2, n) / Rational::from_integer(factorial(n).pow(2).into()))
            .collect();
        SkipSequence::Finite {
            terms,
            shape: Shape::Unimodal,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SkipReport {
    pub ell: u64,
    pub u: u64,
    pub shape: Shape,
    /// `Σ_{k ≥ 1} a_{kℓ+u}`.
    #[serde(serialize_with = "ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub total: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub sup: Rational,
    /// `total/ℓ` for decreasing sequences, `total/ℓ + 2 sup` otherwise.
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

fn check_shape(terms: &[Rational], shape: Shape) -> Result<()> {
    let mut i = 1;
    if shape == Shape::Unimodal {
        while i < terms.len() && terms[i] >= terms[i - 1] {
            i += 1;
        }
    }
    while i < terms.len() {
        if terms[i] > terms[i - 1] {
            return Err(Error::SequenceShape(format!(
                "{} (increase at index {i})",
                if shape == Shape::Decreasing { "decreasing" } else { "unimodal" }
            )));
        }
        i += 1;
    }
    Ok(())
}

/// Exact check of `Σ_{k≥1} a_{kℓ+u} ≤ ℓ^{-1} Σ a_n (+ 2 sup a_n)`.
pub fn skip_lemma_check(seq: &SkipSequence, ell: u64, u: u64) -> Result<SkipReport> {
    if ell == 0 || u >= ell {
        return Err(Error::InvalidArgument(format!("need 0 <= u < ell, got u = {u}, ell = {ell}")));
    }
    let l = Rational::from_integer(ell.into());
    let (lhs, total, sup, shape) = match seq {
        SkipSequence::Geometric(q) => {
            if !q.is_positive() || *q >= Rational::one() {
                return Err(Error::SequenceShape("geometric with 0 < q < 1".into()));
            }
            let ql = pow_rational(q, ell);
            let lhs = &ql * pow_rational(q, u) / (Rational::one() - &ql);
            let total = Rational::one() / (Rational::one() - q);
            (lhs, total, Rational::one(), Shape::Decreasing)
        }
        SkipSequence::Finite { terms, shape } => {
            if terms.iter().any(|t| t.is_negative()) {
                return Err(Error::SequenceShape("nonnegative".into()));
            }
            check_shape(terms, *shape)?;
            let lhs = terms
                .iter()
                .enumerate()
                .skip((ell + u) as usize)
                .filter(|(i, _)| (*i as u64 - u).is_multiple_of(ell))
                .map(|(_, t)| t.clone())
                .sum();
            let total = terms.iter().sum();
            let sup = terms.iter().max().cloned().unwrap_or_else(Rational::zero);
            (lhs, total, sup, *shape)
        }
    };
    let rhs = match shape {
        Shape::Decreasing => &total / &l,
        Shape::Unimodal => &total / &l + &sup * Rational::from_integer(2.into()),
    };
    Ok(SkipReport {
        ell,
        u,
        shape,
        holds: lhs <= rhs,
        lhs,
        total,
        sup,
        rhs,
    })
}

// ---------------------------------------------------------------------------
// log-concavity

#[derive(Clone, Debug, Serialize)]
pub struct ConcavityReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub r: f64,
    pub range: (u64, u64),
    /// Smallest `n0` with a nonpositive second difference at every
    /// `n ∈ [n0, end]`.
    pub onset: u64,
}

/// Is the second difference of `n ↦ ln(r^{2n}/(n!²(n+1)^{N−2}))` at `n ≥ 1`
/// nonpositive? The `r` part is linear in `n` and drops out, leaving the
/// exact test `((n+1)/n)² (n(n+2)/(n+1)²)^{N−2} ≥ 1`.
pub fn is_concave_at(n_dim: usize, n: u64) -> bool {
    let a = Rational::new((n + 1).into(), n.into());
    let b = Rational::new((n * (n + 2)).into(), ((n + 1) * (n + 1)).into());
    &a * &a * pow_rational(&b, n_dim as u64 - 2) >= Rational::one()
}

/// Second difference in floating point, for reporting.
pub fn second_difference(n_dim: usize, r: f64, n: u64) -> f64 {
    ln_series_term(n_dim, n + 1, r) - 2.0 * ln_series_term(n_dim, n, r) + ln_series_term(n_dim, n - 1, r)
}

pub fn log_concavity_check(n_dim: usize, r: f64, start: u64, end: u64) -> Result<ConcavityReport> {
    if n_dim < 2 {
        return Err(Error::DimensionTooSmall(n_dim));
    }
    let lo = start.max(1);
    if end < lo {
        return Err(Error::InvalidArgument(format!("empty range [{start}, {end}]")));
    }
    let mut onset = None;
    for n in (lo..=end).rev() {
        if is_concave_at(n_dim, n) {
            onset = Some(n);
        } else {
            break;
        }
    }
    let onset = onset.ok_or(Error::NoConcavityOnset { start, end })?;
    Ok(ConcavityReport {
        n: n_dim,
        r,
        range: (start, end),
        onset,
    })
}

// ---------------------------------------------------------------------------
// Poisson bound

#[derive(Clone, Debug, Serialize)]
pub struct PoissonReport {
    pub c_n: f64,
    /// `M_2(h, 2r)`.
    pub m2_2r: f64,
    /// Sampled `sup_{|x|=r} |h|`.
    pub sup: f64,
    pub slack: f64,
    /// `c_N M_2(h, 2r) − sup`.
    pub margin: f64,
}

impl PoissonReport {
    pub fn passes(&self) -> bool {
        self.margin >= -self.slack
    }
}

pub fn poisson_bound_check(h: &Polynomial, r: &Radius, samples: usize, c_n: &NormValue) -> Result<PoissonReport> {
    if !h.is_harmonic() {
        return Err(Error::NotHarmonic {
            degree: h.degree().unwrap_or(0),
        });
    }
    let two_r = Radius::new(r.value() * Rational::from_integer(2.into()))?;
    let m2 = m2_mean_squared(h, &two_r).to_f64().unwrap_or(f64::INFINITY).sqrt();
    let sup = sup_on_sphere(h, r, samples);
    let c = c_n.lower_f64();
    Ok(PoissonReport {
        c_n: c,
        m2_2r: m2,
        sup: sup.value,
        slack: sup.slack,
        margin: c * m2 - sup.value,
    })
}
