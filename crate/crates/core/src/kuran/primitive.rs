//! Primitive maps `P_k`, right inverses of `∂^k/∂x1^k` on `H_m`.

use num_bigint::BigInt;
use num_traits::One;

use super::axial::axial_combination;
use super::decompose::{kuran_decompose, KuranDecomposition};
use crate::error::Result;
use crate::numeric::{rising_product, Rational};
use crate::polycalc::{HomogeneousHarmonic, Polynomial};

/// `(a)!/(a+k)! = 1/((a+1)(a+2)…(a+k))`.
pub fn falling_ratio(a: u64, k: u64) -> Rational {
    Rational::new(BigInt::one(), rising_product(a + 1, k).into())
}

/// `P_k(H) = Σ_p (m−p)!/(m−p+k)! · u_p · I*_{m−p+k,N+2p}` from a known
/// decomposition of `H`.
pub fn primitive_from_decomposition(dec: &KuranDecomposition, k: u32) -> Result<Polynomial> {
    let m = dec.degree();
    let n = dec.dim();
    let items: Vec<_> = dec
        .nonzero_parts()
        .map(|(p, u)| (u, m - p + k, p, falling_ratio((m - p) as u64, k as u64)))
        .collect();
    Ok(axial_combination(n, &items))
}

pub fn primitive(h: &HomogeneousHarmonic, k: u32) -> Result<HomogeneousHarmonic> {
    let dec = kuran_decompose(h)?;
    let poly = primitive_from_decomposition(&dec, k)?;
    HomogeneousHarmonic::new(poly, h.degree() + k)
}

/// `P_k` applied to each homogeneous component of a harmonic polynomial.
pub fn primitive_poly(f: &Polynomial, k: u32) -> Result<Polynomial> {
    let mut out = Polynomial::zero(f.dim());
    for c in f.homogeneous_components()? {
        out = &out + primitive(&c, k)?.poly();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hh(s: &str, n: usize) -> HomogeneousHarmonic {
        HomogeneousHarmonic::from_poly(Polynomial::parse(s, Some(n)).unwrap()).unwrap()
    }

    #[test]
    fn worked_examples() {
        let one = HomogeneousHarmonic::new(Polynomial::one(3), 0).unwrap();
        assert_eq!(
            primitive(&one, 2).unwrap().poly(),
            &Polynomial::parse("1/2 x1^2 - 1/4 x2^2 - 1/4 x3^2", Some(3)).unwrap()
        );
        let h = hh("x1 x2", 3);
        let p1 = primitive(&h, 1).unwrap();
        assert_eq!(
            p1.poly(),
            &Polynomial::parse("1/2 x1^2 x2 - 1/8 x2^3 - 1/8 x2 x3^2", Some(3)).unwrap()
        );
        assert_eq!(p1.poly().differentiate(1, 1).unwrap(), *h.poly());
        assert_eq!(primitive(&h, 0).unwrap(), h);
    }

    #[test]
    fn inverse_and_compatibility() {
        let h = hh("x1^2 x3 - 1/3 x3^3 + 2 x2 x3 x4 - x1 x2 x4", 4);
        for k in 0..5 {
            let pk = primitive(&h, k).unwrap();
            assert_eq!(pk.poly().differentiate(1, k).unwrap(), *h.poly());
            for l in 0..4 {
                let pl = primitive(&h, l).unwrap();
                assert_eq!(primitive(&pl, k).unwrap(), primitive(&h, k + l).unwrap());
            }
        }
    }

    #[test]
    fn non_homogeneous_input() {
        let f = Polynomial::parse("3 + x1 x2", Some(3)).unwrap();
        let p = primitive_poly(&f, 2).unwrap();
        assert!(p.is_harmonic());
        assert_eq!(p.differentiate(1, 2).unwrap(), f);
    }
}
