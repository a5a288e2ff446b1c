//! Seeded random harmonic polynomials for property tests and sampling checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::harmonic_basis;
use crate::numeric::Rational;
use crate::polycalc::Polynomial;

/// A nonzero rational `±p/q` with `1 ≤ p, q ≤ height`.
pub fn random_coefficient<R: Rng>(rng: &mut R, height: u64) -> Rational {
    let p = rng.gen_range(1..=height.max(1)) as i64;
    let q = rng.gen_range(1..=height.max(1)) as i64;
    let s = if rng.gen_bool(0.5) { 1 } else { -1 };
    Rational::new((s * p).into(), q.into())
}

/// Random homogeneous harmonic polynomial of degree `m`: a combination of up
/// to `support` orthogonal basis elements with coefficients of height
/// `≤ height`. Never zero.
pub fn random_homogeneous<R: Rng>(rng: &mut R, n: usize, m: u32, height: u64, support: usize) -> Polynomial {
    let basis = harmonic_basis(n, m);
    let take = rng.gen_range(1..=support.clamp(1, basis.len()));
    let mut out = Polynomial::zero(n);
    for b in basis.choose_multiple(rng, take) {
        out = &out + &b.scale(&random_coefficient(rng, height));
    }
    out
}

/// Random harmonic polynomial with components of one to three distinct
/// degrees in `0..=max_degree`.
pub fn random_harmonic<R: Rng>(rng: &mut R, n: usize, max_degree: u32, height: u64) -> Polynomial {
    let parts = rng.gen_range(1..=3u32.min(max_degree + 1));
    let mut degrees: Vec<u32> = (0..=max_degree).collect();
    degrees.shuffle(rng);
    let mut out = Polynomial::zero(n);
    for &m in &degrees[..parts as usize] {
        out = &out + &random_homogeneous(rng, n, m, height, 3);
    }
    out
}

/// Deterministic corpus: `count` polynomials, dimensions cycling through
/// `dims`.
pub fn random_corpus(seed: u64, count: usize, dims: &[usize], max_degree: u32, height: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| random_harmonic(&mut rng, dims[i % dims.len()], max_degree, height))
        .collect()
}
