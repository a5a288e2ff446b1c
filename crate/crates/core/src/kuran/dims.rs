//! `d_{m,N}`, the primitive bound `c_{k,m,N}` and the growth constants `c_m`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{binomial, factorial, from_biguint, rational_to_text, rising_product, NormValue, Rational};

/// `d_{m,N} = dim H_m(R^N) = C(N+m−1, N−1) − C(N+m−3, N−1)`, which is the
/// usual `(N+2m−2)/(N+m−2)·C(N+m−2, m)` with `d_{0,2} = 1` built in.
pub fn dim_harmonic(m: u64, n: u64) -> BigUint {
    assert!(n >= 2, "dimension must be at least 2");
    let a = binomial(n + m - 1, n - 1);
    if m < 2 {
        return a;
    }
    a - binomial(n + m - 3, n - 1)
}

/// `c_{k,m,N} = (N+2m−2)! / (k! (N+2m+k−3)! (N+2m+2k−2))`.
pub fn primitive_bound_constant(k: u64, m: u64, n: u64) -> Rational {
    let a = n + 2 * m - 2;
    if k == 0 {
        return Rational::one();
    }
    let kf = factorial(k);
    if a == 0 {
        // (0)!/(k−1)! over k!·2k
        let den = factorial(k - 1) * kf * BigUint::from(2 * k);
        return Rational::new(BigInt::one(), den.into());
    }
    // a!/(a+k−1)! = a / (a (a+1) ... (a+k−1))
    let den = rising_product(a, k) * kf * BigUint::from(a + 2 * k);
    Rational::new(BigInt::from(a), den.into())
}

/// `a_k = c_{k,m,N} (k+m)!² (k+m+1)^{N−2}`; `c_m²` is the supremum over `k`.
pub fn growth_ratio_term(k: u64, m: u64, n: u64) -> Rational {
    let f = factorial(k + m);
    let p = num_traits::pow(BigUint::from(k + m + 1), (n - 2) as usize);
    primitive_bound_constant(k, m, n) * from_biguint(&f * &f * p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Eventually {
    Decreasing,
    Increasing,
    Constant,
}

/// Audit record behind a growth constant.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthCertificate {
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub k_max: u64,
    /// `sup_k a_k` for this `m` alone.
    #[serde(serialize_with = "ser_rational")]
    pub raw_squared: Rational,
    /// Cumulative maximum over `m' ≤ m`; this is `c_m²`.
    #[serde(serialize_with = "ser_rational")]
    pub c_squared: Rational,
    /// Index attaining the sup, `None` when the sup is the limit.
    pub argmax: Option<u64>,
    /// Beyond this `k` the sign of `a_{k+1} − a_k` no longer changes.
    pub root_bound: u64,
    pub eventually: Eventually,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_text(r))
}

impl GrowthCertificate {
    pub fn c_m(&self) -> NormValue {
        NormValue::exact(self.c_squared.clone()).sqrt()
    }
}

type Poly = Vec<BigInt>; // coefficients, lowest degree first

fn pmul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn linear(c: i64, lead: i64) -> Poly {
    vec![BigInt::from(c), BigInt::from(lead)]
}

fn product(fs: &[Poly]) -> Poly {
    fs.iter().fold(vec![BigInt::one()], |acc, f| pmul(&acc, f))
}

/// `P(x + b)`, exact.
fn taylor_shift(p: &Poly, b: u64) -> Poly {
    let mut q = p.clone();
    let b = BigInt::from(b);
    let n = q.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &q[j + 1] * &b;
            q[j] += t;
        }
    }
    q
}

/// No sign changes in the coefficients of `P(x + b)` means, by Descartes'
/// rule, no root of `P` beyond `b`.
fn no_roots_beyond(p: &Poly, b: u64) -> bool {
    let q = taylor_shift(p, b);
    let lead = q.last().expect("nonzero").sign();
    q.iter().all(|c| c.is_zero() || c.sign() == lead)
}

/// Sign pattern of `a_{k+1} − a_k` for large `k`: `P(k) = num(k) − den(k)`
/// where `a_{k+1}/a_k = num/den`. Returns the eventual behaviour and the
/// smallest integer `b` for which `P(x + b)` has no sign changes, so that
/// `P` keeps the sign of its leading coefficient on `(b, ∞)`.
fn ratio_certificate(m: u64, n: u64) -> (Eventually, u64) {
    let (m, n) = (m as i64, n as i64);
    let a = n + 2 * m - 2;
    let mut num = vec![linear(m + 1, 1), linear(m + 1, 1), linear(a, 2)];
    let mut den = vec![linear(1, 1), linear(a, 1), linear(a + 2, 2)];
    for _ in 0..(n - 2) {
        num.push(linear(m + 2, 1));
        den.push(linear(m + 1, 1));
    }
    let pn = product(&num);
    let pd = product(&den);
    let len = pn.len().max(pd.len());
    let mut p: Vec<BigInt> = (0..len)
        .map(|i| pn.get(i).cloned().unwrap_or_default() - pd.get(i).cloned().unwrap_or_default())
        .collect();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let Some(lead) = p.last().cloned() else {
        return (Eventually::Constant, 0);
    };
    let ev = if lead.is_positive() {
        Eventually::Increasing
    } else {
        Eventually::Decreasing
    };
    let mut hi = 1u64;
    while !no_roots_beyond(&p, hi) {
        hi *= 2;
    }
    let mut lo = 0u64;
    if no_roots_beyond(&p, 0) {
        return (ev, 0);
    }
    // invariant: fails at lo, holds at hi
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if no_roots_beyond(&p, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (ev, hi)
}

/// `c_m²` for a single `m`, without the cumulative max.
fn raw_growth_constant(m: u64, n: u64, k_max: u64) -> Result<(Rational, Option<u64>, u64, Eventually)> {
    let (ev, bound) = ratio_certificate(m, n);
    if k_max < bound {
        return Err(Error::CertificateFailed {
            k_max,
            root_bound: bound.to_string(),
        });
    }
    let mut best = growth_ratio_term(0, m, n);
    let mut arg = 0;
    for k in 1..=k_max {
        let a = growth_ratio_term(k, m, n);
        if a > best {
            best = a;
            arg = k;
        }
    }
    if ev == Eventually::Increasing {
        // a_k increases to (N+2m−2)!/2
        let limit = from_biguint(factorial(n + 2 * m - 2)) / Rational::from_integer(2.into());
        if limit > best {
            return Ok((limit, None, bound, ev));
        }
    }
    Ok((best, Some(arg), bound, ev))
}

/// Certified `c_m²`, made nondecreasing in `m` by a cumulative maximum.
pub fn growth_constant_certificate(m: u64, n: u64, k_max: u64) -> Result<GrowthCertificate> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n as usize));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let mut c2 = Rational::zero();
    let mut last = None;
    for mm in 0..=m {
        let (raw, arg, bound, ev) = raw_growth_constant(mm, n, k_max)?;
        if raw > c2 {
            c2 = raw.clone();
        }
        last = Some((raw, arg, bound, ev));
    }
    let (raw, argmax, bound, eventually) = last.expect("m >= 0");
    Ok(GrowthCertificate {
        m,
        n,
        k_max,
        raw_squared: raw,
        c_squared: c2,
        argmax,
        root_bound: bound,
        eventually,
    })
}

/// `c_m` (extended precision); see [`growth_constant_certificate`].
pub fn growth_constant(m: u64, n: u64, k_max: u64) -> Result<NormValue> {
    Ok(growth_constant_certificate(m, n, k_max)?.c_m())
}
