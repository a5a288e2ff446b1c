//! Integral means over spheres `S(r)` with the normalized surface measure
//! (`σ_r(S(r)) = 1`), sampled sup-norms, the local-uniform metric, and the
//! Poisson-kernel constant `c_N`.
//!
//! Exact values all come from the closed form for `∫_S x^α dσ`; floating
//! point appears only in the sampled sup-norm and in [`poisson_constant`].

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numeric::{parse_rational, pow_rational, rational_to_text, NormValue, Rational};
use crate::polycalc::{Monomial, Polynomial};

/// A sphere radius, a positive rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Radius(Rational);

impl Radius {
    pub fn new(r: Rational) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::InvalidRadius(rational_to_text(&r)));
        }
        Ok(Radius(r))
    }

    pub fn one() -> Self {
        Radius(Rational::one())
    }

    pub fn from_ratio(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidRadius(format!("{p}/{q}")));
        }
        Radius::new(crate::numeric::rat(p, q))
    }

    /// Exact rational nearest to `x` with denominator `2^40`.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidRadius(x.to_string()));
        }
        let q = 1u64 << 40;
        let p = (x * q as f64).round();
        Radius::new(Rational::new((p as u128).into(), q.into()))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Radius::new(parse_rational(s)?)
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `r^e`, exact.
    pub fn pow(&self, e: u64) -> Rational {
        pow_rational(&self.0, e)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational_to_text(&self.0))
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_text(&self.0))
    }
}

/// `∫_S x^α dσ` over the unit sphere of `R^N`:
/// `Π (α_i − 1)!! / Π_{j<|α|/2} (N + 2j)` if every `α_i` is even, else 0.
pub fn monomial_sphere_integral(alpha: &Monomial, n: usize) -> Rational {
    exponent_integral(alpha.exponents(), n)
}

fn exponent_integral(alpha: &[u32], n: usize) -> Rational {
    if alpha.iter().any(|a| a % 2 == 1) {
        return Rational::zero();
    }
    let mut num = BigUint::one();
    for &a in alpha {
        let mut k = 1u64;
        while k < a as u64 {
            num *= k;
            k += 2;
        }
    }
    let half: u64 = alpha.iter().map(|&a| a as u64).sum::<u64>() / 2;
    let mut den = BigUint::one();
    for j in 0..half {
        den *= n as u64 + 2 * j;
    }
    Rational::new(num.into(), den.into())
}

/// Mean of `p` over the unit sphere.
pub fn sphere_mean(p: &Polynomial) -> Rational {
    let n = p.dim();
    p.terms()
        .map(|(m, c)| c * monomial_sphere_integral(m, n))
        .sum()
}

fn parity_key(e: &[u32]) -> Vec<bool> {
    e.iter().map(|x| x % 2 == 1).collect()
}

/// Integer coefficients `c·L` bucketed by exponent parity, with `L` the lcm
/// of the denominators.
type Buckets = BTreeMap<Vec<bool>, Vec<(Vec<u32>, BigInt)>>;

fn integer_buckets(p: &Polynomial) -> (BigInt, Buckets) {
    let l = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut buckets = Buckets::new();
    for (m, c) in p.terms() {
        let v = c.numer() * (&l / c.denom());
        buckets.entry(parity_key(m.exponents())).or_default().push((m.exponents().to_vec(), v));
    }
    (l, buckets)
}

/// `⟨g, h⟩_r = ∫_{S(r)} g h dσ_r`, exact.
///
/// Only monomial pairs with matching exponent parities contribute. Products
/// are accumulated per exponent vector in integers; the sphere weights and
/// `r^D` are applied once per total degree `D`.
pub fn inner_product(g: &Polynomial, h: &Polynomial, r: &Radius) -> Result<Rational> {
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: h.dim(),
        });
    }
    let same = std::ptr::eq(g, h) || g == h;
    let (lg, gb) = integer_buckets(g);
    let (lh, hb) = if same { (lg.clone(), gb.clone()) } else { integer_buckets(h) };
    let mut sums: HashMap<Vec<u32>, BigInt> = HashMap::new();
    let mut add = |a: &[u32], b: &[u32], v: BigInt| {
        let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        *sums.entry(e).or_default() += v;
    };
    for (key, gs) in &gb {
        let Some(hs) = hb.get(key) else { continue };
        if same {
            for (i, (ga, gc)) in gs.iter().enumerate() {
                add(ga, ga, gc * gc);
                for (ha, hc) in &gs[i + 1..] {
                    add(ga, ha, 2 * gc * hc);
                }
            }
        } else {
            for (ga, gc) in gs {
                for (ha, hc) in hs {
                    add(ga, ha, gc * hc);
                }
            }
        }
    }
    // Σ_e S_e Π(e_i − 1)!! grouped by |e|
    let mut by_degree: BTreeMap<u64, BigInt> = BTreeMap::new();
    let mut dfact: Vec<BigUint> = vec![BigUint::one()];
    for (e, v) in sums {
        if v.is_zero() {
            continue;
        }
        let mut w = BigUint::one();
        for &a in &e {
            let a = a as usize;
            while dfact.len() <= a {
                // dfact[a] = (a − 1)!!, over even a only
                let k = dfact.len();
                let next = if k < 2 { BigUint::one() } else { &dfact[k - 2] * (k as u64 - 1) };
                dfact.push(next);
            }
            if a > 1 {
                w *= &dfact[a];
            }
        }
        let d: u64 = e.iter().map(|&a| a as u64).sum();
        *by_degree.entry(d).or_default() += v * BigInt::from(w);
    }
    let n = g.dim() as u64;
    let mut acc = Rational::zero();
    let mut den = BigUint::one();
    let mut half = 0u64;
    for (d, t) in by_degree {
        while half < d / 2 {
            den *= n + 2 * half;
            half += 1;
        }
        acc += Rational::new(t, den.clone().into()) * r.pow(d);
    }
    Ok(acc / Rational::from_integer(lg * lh))
}

/// `M_2²(h, r)`, exact.
pub fn m2_mean_squared(h: &Polynomial, r: &Radius) -> Rational {
    inner_product(h, h, r).expect("same polynomial")
}

/// `M_2(h, r)` at extended precision.
pub fn m2_mean(h: &Polynomial, r: &Radius) -> NormValue {
    NormValue::exact(m2_mean_squared(h, r)).sqrt()
}

// ---------------------------------------------------------------------------
// sampling

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut x = 0.0;
    while i > 0 {
        f /= base as f64;
        x += f * (i % base) as f64;
        i /= base;
    }
    x
}

/// Deterministic point set on the unit sphere of `R^N`: the `2N` points
/// `±e_i` first, then Halton points pushed through the normal quantile and
/// normalized. Each prefix of the sequence is the sequence for a smaller
/// `count`, which makes sampled maxima monotone in `count`.
pub fn sphere_points(n: usize, count: usize) -> Vec<Vec<f64>> {
    assert!(n <= PRIMES.len(), "sphere sampling supports N <= 16");
    let normal = Normal::standard();
    let mut out = Vec::with_capacity(count);
    'axes: for i in 0..n {
        for s in [1.0, -1.0] {
            if out.len() == count {
                break 'axes;
            }
            let mut v = vec![0.0; n];
            v[i] = s;
            out.push(v);
        }
    }
    let mut idx = 1u64;
    while out.len() < count {
        let mut v: Vec<f64> = (0..n)
            .map(|d| normal.inverse_cdf(radical_inverse(idx, PRIMES[d] as u64)))
            .collect();
        idx += 1;
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 1e-12 && norm.is_finite()) {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        out.push(v);
    }
    out
}

/// Heuristic angular covering radius of `count` well-spread points on the
/// unit sphere of `R^N`: the cap radius for which `count` caps cover four
/// times the sphere's area.
pub fn sampling_mesh(n: usize, count: usize) -> f64 {
    let dim = (n - 1) as f64; // sphere dimension
    let ln_area = (2.0f64).ln() + (n as f64 / 2.0) * PI.ln() - ln_gamma(n as f64 / 2.0);
    let ln_ball = (dim / 2.0) * PI.ln() - ln_gamma(dim / 2.0 + 1.0);
    let ln_theta = ((4.0f64).ln() + ln_area - ln_ball - (count as f64).ln()) / dim;
    ln_theta.exp().min(PI)
}

/// Result of a sampled sup-norm: a lower estimate plus declared slack.
#[derive(Clone, Debug, Serialize)]
pub struct SupEstimate {
    /// Largest sampled `|h|`; never exceeds the true sup.
    pub value: f64,
    pub samples: usize,
    /// Angular mesh from [`sampling_mesh`].
    pub mesh: f64,
    /// Absolute slack `Lip(h on S(r)) · r · mesh`; the true sup is believed
    /// to lie in `[value, value + slack]`.
    pub slack: f64,
}

impl SupEstimate {
    pub fn to_norm_value(&self) -> NormValue {
        let rel = if self.value > 0.0 {
            self.slack / self.value
        } else {
            0.0
        };
        NormValue::from_f64(self.value, rel)
    }
}

/// Gradient bound of `h` on `S(r)`: `Σ |c_α| |α| r^{|α|−1}`.
fn lipschitz_on_sphere(h: &Polynomial, r: f64) -> f64 {
    h.terms()
        .map(|(m, c)| {
            let d = m.degree();
            if d == 0 {
                0.0
            } else {
                c.to_f64().unwrap_or(f64::INFINITY).abs() * d as f64 * r.powi(d as i32 - 1)
            }
        })
        .sum()
}

/// Sampled `sup_{|x|=r} |h(x)|`.
pub fn sup_on_sphere(h: &Polynomial, r: &Radius, samples: usize) -> SupEstimate {
    let samples = samples.max(1);
    let n = h.dim();
    let rf = r.to_f64();
    let eval = h.to_f64_evaluator();
    let mut x = vec![0.0; n];
    let mut best = 0.0f64;
    for p in sphere_points(n, samples) {
        for i in 0..n {
            x[i] = rf * p[i];
        }
        best = best.max(eval.eval(&x).abs());
    }
    let mesh = sampling_mesh(n, samples);
    SupEstimate {
        value: best,
        samples,
        mesh,
        slack: lipschitz_on_sphere(h, rf) * rf * mesh,
    }
}

/// Partial sum `Σ_{n=1..terms} 2^{-n} s_n/(1+s_n)` of the local-uniform
/// metric, where `s_n` is the sampled sup of `|g − h|` on `S(n)`.
pub fn frechet_distance(
    g: &Polynomial,
    h: &Polynomial,
    terms: u32,
    samples: usize,
) -> Result<NormValue> {
    let diff = g.try_add(&-h)?;
    if diff.is_zero() {
        return Ok(NormValue::zero());
    }
    let mut value = 0.0;
    let mut err = 0.0;
    for n in 1..=terms.max(1) {
        let s = sup_on_sphere(&diff, &Radius::from_ratio(n as i64, 1)?, samples);
        let w = 0.5f64.powi(n as i32);
        value += w * s.value / (1.0 + s.value);
        // t ↦ t/(1+t) is 1-Lipschitz and bounded by 1
        let hi = (s.value + s.slack) / (1.0 + s.value + s.slack);
        err += w * (hi - s.value / (1.0 + s.value));
    }
    let rel = if value > 0.0 { err / value } else { 0.0 };
    Ok(NormValue::from_f64(value, rel + 1e-15))
}

// ---------------------------------------------------------------------------
// Poisson constant

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton on `P_n`).
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre on `[a, b]` with `panels` panels of `rule`.
fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let mut s = 0.0;
        for &(x, w) in rule {
            s += w * f(lo + (x + 1.0) * h / 2.0);
        }
        total += s * h / 2.0;
    }
    total
}

/// `∫_S P(x, y)² dσ(y)` for `|x| = t`, as a ratio of two 1-D integrals in the
/// polar angle. Returns the value and the change from the previous panel
/// doubling.
fn poisson_square_mean(n: usize, t: f64, tol: f64, max_iter: u32) -> Result<(f64, f64)> {
    let rule = gauss_legendre(20);
    let np = (n - 2) as i32;
    let w = |th: f64| th.sin().powi(np);
    let f = |th: f64| {
        let d = 1.0 + t * t - 2.0 * t * th.cos();
        let p = (1.0 - t * t) / d.powf(n as f64 / 2.0);
        p * p * w(th)
    };
    let mut panels = 2;
    let mut prev = f64::NAN;
    for iter in 0..max_iter {
        let v = integrate(&f, 0.0, PI, panels, &rule) / integrate(&w, 0.0, PI, panels, &rule);
        let change = (v - prev).abs();
        if change <= tol * v.abs() {
            return Ok((v, change));
        }
        if iter + 1 == max_iter {
            return Err(Error::PrecisionUnachievable {
                requested: tol,
                achieved: change / v.abs(),
                iterations: max_iter as usize,
            });
        }
        prev = v;
        panels *= 2;
    }
    unreachable!()
}

/// `c_N = sup_{|x| ≤ 1/2} (∫_S P(x, y)² dσ(y))^{1/2}` for the unit ball,
/// computed by 1-D quadrature in the polar angle and a grid plus
/// golden-section search over `|x|`. `tol` is the target relative error.
pub fn poisson_constant(n: usize, tol: f64) -> Result<NormValue> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let qtol = (tol * 1e-2).max(1e-15);
    let g = |t: f64| poisson_square_mean(n, t, qtol, 16).map(|(v, _)| v);
    let grid = 32;
    let mut best_t = 0.0;
    let mut best = g(0.0)?;
    for i in 1..=grid {
        let t = 0.5 * i as f64 / grid as f64;
        let v = g(t)?;
        if v > best {
            best = v;
            best_t = t;
        }
    }
    // refine inside the neighbouring grid cells
    let (mut a, mut b) = ((best_t - 0.5 / grid as f64).max(0.0), (best_t + 0.5 / grid as f64).min(0.5));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (g(c)?, g(d)?);
    let mut iters = 0;
    while b - a > 1e-13 {
        iters += 1;
        if iters > 200 {
            return Err(Error::PrecisionUnachievable {
                requested: tol,
                achieved: b - a,
                iterations: iters,
            });
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = g(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = g(d)?;
        }
    }
    for v in [fc, fd, g(a)?, g(b)?] {
        best = best.max(v);
    }
    let (_, change) = poisson_square_mean(n, best_t.max(a), qtol, 16)?;
    let rel = (change / best).max(1e-15) / 2.0 + 1e-14;
    if rel > tol {
        return Err(Error::PrecisionUnachievable {
            requested: tol,
            achieved: rel,
            iterations: iters,
        });
    }
    Ok(NormValue::from_f64(best.sqrt(), rel))
}

// ---------------------------------------------------------------------------
// CSV

/// One row of an `(r, value, error)` table.
#[derive(Clone, Debug)]
pub struct NormRow {
    pub r: Radius,
    pub value: NormValue,
}

/// Writes `r,value,error` rows; exact values print as `p/q` with error `0`.
pub fn write_norm_csv<W: Write>(rows: &[NormRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "value", "error"])?;
    for row in rows {
        let err = match &row.value {
            NormValue::Exact(_) => "0".to_string(),
            v => format!("{:.6e}", v.to_f64() * v.rel_err()),
        };
        w.write_record([row.r.to_string(), row.value.to_text(), err])?;
    }
    w.flush()?;
    Ok(())
}
