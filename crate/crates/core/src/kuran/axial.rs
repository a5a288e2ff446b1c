//! Axial harmonics `I_{m,N}` and their restrictions `I*_{m,N+2p}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{factorial, Rational};
use crate::polycalc::{HomogeneousHarmonic, Monomial, Polynomial};

/// Coefficients `a_j` of `Σ_j a_j x1^{m−2j} ρ^{2j}`, harmonic in `R^{dim}`
/// with `a_0 = 1`.
///
/// Harmonicity is a triangular linear system in the `a_j`: matching the
/// coefficient of `x1^{m−2j−2} ρ^{2j}` in the Laplacian gives
/// `a_{j+1} = −a_j (m−2j)(m−2j−1) / (2(j+1)(2j+dim−1))`.
pub fn axial_coefficients(m: u32, dim: usize) -> Vec<Rational> {
    let mut a = vec![Rational::one()];
    for j in 0..(m / 2) as i64 {
        let m = m as i64;
        let num = (m - 2 * j) * (m - 2 * j - 1);
        let den = 2 * (j + 1) * (2 * j + dim as i64 - 1);
        let next = -a[j as usize].clone() * Rational::new(num.into(), den.into());
        a.push(next);
    }
    a
}

/// `ρ^{2j} = (x2² + … + xN²)^j` in `N` variables, by the multinomial theorem.
pub fn rho_power(n: usize, j: u32) -> Polynomial {
    rho_power_from(n, 1, j)
}

/// `(x_{first+1}² + … + x_N²)^j` with `first` 0-based.
pub(crate) fn rho_power_from(n: usize, first: usize, j: u32) -> Polynomial {
    let mut out = Polynomial::zero(n);
    if first >= n {
        return if j == 0 { Polynomial::one(n) } else { out };
    }
    let jf = factorial(j as u64);
    let mut e = vec![0u32; n];
    fn rec(out: &mut Polynomial, e: &mut Vec<u32>, first: usize, i: usize, left: u32, jf: &num_bigint::BigUint) {
        let n = e.len();
        if i == n - 1 {
            e[i] = 2 * left;
            let mut den = num_bigint::BigUint::one();
            for &x in &e[first..] {
                den *= factorial((x / 2) as u64);
            }
            out.add_term(
                Monomial::new(e.clone()),
                Rational::new(BigInt::from(jf.clone()), den.into()),
            );
            e[i] = 0;
            return;
        }
        for b in 0..=left {
            e[i] = 2 * b;
            rec(out, e, first, i + 1, left - b, jf);
        }
        e[i] = 0;
    }
    rec(&mut out, &mut e, first, first, j, &jf);
    out
}

/// `Σ_j a_j x_{axis}^{m−2j} ρ^{2j}` in `n` variables, where `ρ` runs over
/// the variables after `axis` (0-based) and the coefficients are those for
/// dimension `dim`.
pub(crate) fn axial_poly_at(axis: usize, m: u32, n: usize, dim: usize) -> Polynomial {
    let mut out = Polynomial::zero(n);
    for (j, a) in axial_coefficients(m, dim).iter().enumerate() {
        let mut e = vec![0u32; n];
        e[axis] = m - 2 * j as u32;
        out = &out + &rho_power_from(n, axis + 1, j as u32).mul_monomial(&Monomial::new(e), a);
    }
    out
}

fn axial_poly(m: u32, n: usize, dim: usize) -> Polynomial {
    axial_poly_at(0, m, n, dim)
}

/// The normalized `x1`-axial element of `H_m(R^N)`.
#[derive(Clone, Debug, Serialize)]
pub struct AxialHarmonic {
    pub m: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub poly: HomogeneousHarmonic,
}

pub fn axial_harmonic(m: u32, n: usize) -> Result<AxialHarmonic> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let poly = HomogeneousHarmonic::new(axial_poly(m, n, n), m)?;
    Ok(AxialHarmonic { m, n, poly })
}

/// `I*_{m,N+2p}(x1..xN) = I_{m,N+2p}(x1, …, xN, 0, …, 0)`.
pub fn restrict_axial(m: u32, n: usize, p: u32) -> Result<Polynomial> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    Ok(axial_poly(m, n, n + 2 * p as usize))
}

/// `Σ scale · u · I*_{m,N+2p}` over `(u, m, p, scale)` with every `u` free of
/// `x1`, without expanding the axials.
///
/// `u I*_{m,N+2p} = Σ_j a_j x1^{m−2j} (u ρ^{2j})` and each `u ρ^{2j}` is the
/// previous one times `ρ²`. Pieces with the same power of `x1` share one
/// common denominator, so coefficients are reduced once per group.
/// Integer coefficients of one polynomial over a shared denominator.
type IntTerms = Vec<(Vec<u32>, BigInt)>;

pub(crate) fn axial_combination(n: usize, items: &[(&Polynomial, u32, u32, Rational)]) -> Polynomial {
    // chains[i][j] = numerators of u_i ρ^{2j} over the lcm of u_i's denominators
    let mut chains: Vec<Vec<IntTerms>> = Vec::with_capacity(items.len());
    let mut pieces: Vec<(usize, usize, u32, Rational)> = Vec::new();
    for (u, m, p, scale) in items {
        debug_assert!(!u.depends_on(1));
        if u.is_zero() || scale.is_zero() {
            continue;
        }
        let l = u.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut chain = vec![u
            .terms()
            .map(|(mono, c)| (mono.exponents().to_vec(), c.numer() * (&l / c.denom())))
            .collect::<Vec<_>>()];
        let coeffs = axial_coefficients(*m, n + 2 * *p as usize);
        for _ in 1..coeffs.len() {
            let mut next: FxHashMap<Vec<u32>, BigInt> = FxHashMap::default();
            for (e, c) in chain.last().expect("nonempty") {
                for i in 1..n {
                    let mut e = e.clone();
                    e[i] += 2;
                    *next.entry(e).or_default() += c;
                }
            }
            chain.push(next.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        }
        let scale = scale / Rational::from_integer(l);
        for (j, a) in coeffs.iter().enumerate() {
            pieces.push((chains.len(), j, m - 2 * j as u32, a * &scale));
        }
        chains.push(chain);
    }
    // pieces with different x1 exponents never meet, so each group gets its
    // own (much smaller) common denominator
    pieces.sort_by_key(|pc| pc.2);
    let mut out = Polynomial::zero(n);
    for group in pieces.chunk_by(|a, b| a.2 == b.2) {
        let x1 = group[0].2;
        let den = group.iter().fold(BigInt::one(), |acc, pc| acc.lcm(pc.3.denom()));
        let mut acc: FxHashMap<&[u32], BigInt> = FxHashMap::default();
        for (i, j, _, f) in group {
            let mult = f.numer() * (&den / f.denom());
            for (e, c) in &chains[*i][*j] {
                *acc.entry(&e[1..]).or_default() += c * &mult;
            }
        }
        for (rest, c) in acc {
            if !c.is_zero() {
                let mut e = Vec::with_capacity(n);
                e.push(x1);
                e.extend_from_slice(rest);
                out.add_term(Monomial::new(e), Rational::new(c, den.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kuran::dim_harmonic;
    use crate::numeric::int;
    use crate::spheremeans::{m2_mean_squared, Radius};

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn small_axials() {
        assert_eq!(axial_harmonic(1, 4).unwrap().poly.poly(), &p("x1", 4));
        assert_eq!(
            axial_harmonic(2, 3).unwrap().poly.poly(),
            &p("x1^2 - 1/2 x2^2 - 1/2 x3^2", 3)
        );
        assert_eq!(
            axial_harmonic(2, 5).unwrap().poly.poly(),
            &p("x1^2 - 1/4 x2^2 - 1/4 x3^2 - 1/4 x4^2 - 1/4 x5^2", 5)
        );
        assert_eq!(
            axial_harmonic(3, 3).unwrap().poly.poly(),
            &p("x1^3 - 3/2 x1 x2^2 - 3/2 x1 x3^2", 3)
        );
    }

    #[test]
    fn restrictions() {
        assert_eq!(restrict_axial(2, 3, 1).unwrap(), p("x1^2 - 1/4 x2^2 - 1/4 x3^2", 3));
        assert_eq!(restrict_axial(1, 3, 5).unwrap(), p("x1", 3));
        assert_eq!(
            restrict_axial(4, 3, 0).unwrap(),
            axial_harmonic(4, 3).unwrap().poly.into_poly()
        );
        assert!(!restrict_axial(2, 3, 1).unwrap().is_harmonic());
    }

    #[test]
    fn normalization_and_norm() {
        let one = Radius::one();
        let pole = |n: usize| {
            let mut v = vec![int(0); n];
            v[0] = int(1);
            v
        };
        for n in 2..7 {
            for m in 0..13 {
                let a = axial_harmonic(m, n).unwrap();
                assert_eq!(a.poly.poly().evaluate(&pole(n)).unwrap(), int(1));
                let d = Rational::from_integer(dim_harmonic(m as u64, n as u64).into());
                assert_eq!(m2_mean_squared(a.poly.poly(), &one), Rational::one() / d);
            }
        }
        let r = Radius::from_ratio(5, 2).unwrap();
        let a = axial_harmonic(3, 4).unwrap();
        assert_eq!(
            m2_mean_squared(a.poly.poly(), &r),
            r.pow(6) / Rational::from_integer(dim_harmonic(3, 4).into())
        );
    }

    #[test]
    fn rho_powers() {
        assert_eq!(rho_power(3, 2), p("x2^4 + 2 x2^2 x3^2 + x3^4", 3));
        assert_eq!(rho_power(2, 3), p("x2^6", 2));
        assert_eq!(rho_power(4, 0), Polynomial::one(4));
    }
}
