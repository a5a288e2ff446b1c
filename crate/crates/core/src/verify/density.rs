//! Counting `B_k ∩ [0, T]` without enumerating `[0, T]`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::construct::EllSequence;
use crate::error::{Error, Result};
use crate::numeric::{rational_to_text, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub k: u32,
    pub ell: u64,
    pub threshold: u64,
    #[serde(rename = "T")]
    pub horizon: u64,
    pub count: u64,
    #[serde(serialize_with = "ser_rational")]
    pub ratio: Rational,
    /// `1/(4 ℓ_k² 2^k)`.
    #[serde(serialize_with = "ser_rational")]
    pub target: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_text(r))
}

pub fn density_target(k: u32, ell: u64) -> Rational {
    Rational::new(1.into(), (BigUint::from(4 * ell * ell) << k as usize).into())
}

/// `#(B_k ∩ [0, T])` for `B_k = ∪_{n ∈ A_k, n ≥ t ℓ} B_{n,k}`: each `n` with
/// `n² < T` contributes `clamp(⌊(T − n²)/ℓ⌋, 0, n/ℓ)`.
pub fn count_b(k: u32, ell: u64, threshold: u64, horizon: u64) -> u64 {
    let step = ell << k;
    let mut count = 0u64;
    let mut n = step;
    while let Some(n2) = n.checked_mul(n) {
        if n2 >= horizon {
            break;
        }
        if n >= threshold * ell {
            count += ((horizon - n2) / ell).min(n / ell);
        }
        n += 2 * step;
    }
    count
}

/// Density of `B_k` up to the raw parameters `(k, ℓ_k, threshold)`.
pub fn lower_density_raw(k: u32, ell: u64, threshold: u64, horizon: u64) -> Result<DensityReport> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon T must be at least 1".into()));
    }
    if ell == 0 || ell.is_multiple_of(2) || k == 0 {
        return Err(Error::InvalidArgument(format!("need k >= 1 and odd ell, got k = {k}, ell = {ell}")));
    }
    let count = count_b(k, ell, threshold, horizon);
    Ok(DensityReport {
        k,
        ell,
        threshold,
        horizon,
        count,
        ratio: Rational::new(count.into(), horizon.into()),
        target: density_target(k, ell),
    })
}

pub fn lower_density(k: u32, ell: &EllSequence, horizon: u64) -> Result<DensityReport> {
    lower_density_raw(k, ell.ell(k as u64)?, ell.threshold, horizon)
}

/// Reports at the left boundaries `T = n²` of the first `blocks` windows
/// `B_{n,k}`, where the ratio counts only completed windows.
pub fn boundary_profile(k: u32, ell: u64, threshold: u64, blocks: usize) -> Result<Vec<DensityReport>> {
    let step = ell << k;
    let mut q = 1;
    let mut out = Vec::with_capacity(blocks);
    while out.len() < blocks {
        let n = q * step;
        if n >= threshold * ell {
            out.push(lower_density_raw(k, ell, threshold, n * n)?);
        }
        q += 2;
    }
    Ok(out)
}

/// True if the ratios never decrease along the given reports.
pub fn is_nondecreasing(reports: &[DensityReport]) -> bool {
    reports.windows(2).all(|w| w[1].ratio >= w[0].ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn target_and_small_horizons() {
        assert_eq!(density_target(1, 5), rat(1, 200));
        let r = lower_density_raw(1, 5, 10, 2500).unwrap();
        assert_eq!(r.count, 0);
        // B_{50,1} = {2505, …, 2550}
        assert_eq!(count_b(1, 5, 10, 2506), 1);
        assert_eq!(count_b(1, 5, 10, 2551), 10);
        assert_eq!(count_b(1, 5, 10, 4900), 10);
    }

    #[test]
    fn counts_match_enumeration() {
        let t = 200_000u64;
        let mut brute = 0;
        let mut n = 10u64;
        while n * n < t {
            if n >= 50 {
                for j in 1..=n / 5 {
                    if n * n + j * 5 <= t {
                        brute += 1;
                    }
                }
            }
            n += 20;
        }
        assert_eq!(count_b(1, 5, 10, t), brute);
    }

    #[test]
    fn large_horizon_near_target() {
        let r = lower_density_raw(1, 5, 10, 100_000_000).unwrap();
        let rel = (&r.ratio - &r.target) / &r.target;
        assert!(rel.clone() * rel < rat(1, 100));
        let b = boundary_profile(1, 5, 10, 50).unwrap();
        assert!(is_nondecreasing(&b));
        assert!(b.iter().all(|x| x.ratio <= x.target));
    }
}
