//! Kuran decomposition `H = Σ_p u_p I*_{m−p,N+2p}` with `u_p ∈ H_p^0`.

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::axial::{axial_coefficients, axial_combination, rho_power};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::polycalc::{HomogeneousHarmonic, Monomial, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KuranDecomposition {
    m: u32,
    n: usize,
    /// `parts[p] = u_p`, for `p = 0..=m`.
    parts: Vec<Polynomial>,
}

impl KuranDecomposition {
    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn part(&self, p: u32) -> &Polynomial {
        &self.parts[p as usize]
    }

    /// `(p, u_p)` for every `p`, zero parts included.
    pub fn parts(&self) -> impl Iterator<Item = (u32, &Polynomial)> {
        self.parts.iter().enumerate().map(|(p, u)| (p as u32, u))
    }

    pub fn nonzero_parts(&self) -> impl Iterator<Item = (u32, &Polynomial)> {
        self.parts().filter(|(_, u)| !u.is_zero())
    }

    /// The summand `u_p I*_{m−p,N+2p}`.
    pub fn term(&self, p: u32) -> Result<Polynomial> {
        Ok(axial_combination(self.n, &[(self.part(p), self.m - p, p, Rational::one())]))
    }

    pub fn recombine(&self) -> Result<Polynomial> {
        let items: Vec<_> = self.nonzero_parts().map(|(p, u)| (u, self.m - p, p, Rational::one())).collect();
        Ok(axial_combination(self.n, &items))
    }
}

impl Serialize for KuranDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Part<'a> {
            p: u32,
            u_p: &'a Polynomial,
        }
        let parts: Vec<Part> = self.parts().map(|(p, u_p)| Part { p, u_p }).collect();
        let mut st = s.serialize_struct("KuranDecomposition", 3)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("N", &self.n)?;
        st.serialize_field("parts", &parts)?;
        st.end()
    }
}

/// Decomposes `H ∈ H_m(R^N)`.
///
/// Writing `H = Σ_i x1^{m−i} h_i(x2..xN)` and matching powers of `x1`
/// against `Σ_p u_p Σ_j a_j^{(m−p,N+2p)} x1^{m−p−2j} ρ^{2j}` gives a linear
/// system that is triangular in `p`:
/// `u_i = h_i − Σ_{j≥1} a_j^{(m−i+2j, N+2(i−2j))} u_{i−2j} ρ^{2j}`.
/// The result is checked afterwards (recombination, `Δu_p = 0`, no `x1`).
pub fn kuran_decompose(h: &HomogeneousHarmonic) -> Result<KuranDecomposition> {
    let m = h.degree();
    let n = h.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let mut slices = vec![Polynomial::zero(n); m as usize + 1];
    for (mono, c) in h.poly().terms() {
        let e = mono.exponents();
        let i = (m - e[0]) as usize;
        let mut rest = e.to_vec();
        rest[0] = 0;
        slices[i].add_term(Monomial::new(rest), c.clone());
    }
    let rho: Vec<Polynomial> = (0..=m / 2).map(|j| rho_power(n, j)).collect();
    let mut parts: Vec<Polynomial> = Vec::with_capacity(m as usize + 1);
    for i in 0..=m {
        let mut u = slices[i as usize].clone();
        let mut j = 1;
        while 2 * j <= i {
            let q = i - 2 * j;
            let uq = &parts[q as usize];
            if !uq.is_zero() {
                let a = &axial_coefficients(m - q, n + 2 * q as usize)[j as usize];
                if !a.is_zero() {
                    u = &u - &(uq * &rho[j as usize]).scale(a);
                }
            }
            j += 1;
        }
        parts.push(u);
    }
    let dec = KuranDecomposition { m, n, parts };
    for (p, u) in dec.parts() {
        if u.depends_on(1) || !u.is_harmonic() || !u.is_homogeneous() || u.min_degree().is_some_and(|d| d != p) {
            return Err(Error::InconsistentSystem(format!(
                "u_{p} is not in H_{p}^0"
            )));
        }
    }
    if &dec.recombine()? != h.poly() {
        return Err(Error::InconsistentSystem("recombination differs from input".into()));
    }
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spheremeans::{inner_product, Radius};

    fn hh(s: &str, n: usize) -> HomogeneousHarmonic {
        HomogeneousHarmonic::from_poly(Polynomial::parse(s, Some(n)).unwrap()).unwrap()
    }

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn worked_examples() {
        let d = kuran_decompose(&hh("x1", 3)).unwrap();
        assert_eq!(d.part(0), &Polynomial::one(3));
        assert!(d.part(1).is_zero());

        let d = kuran_decompose(&hh("x1 x2", 3)).unwrap();
        assert!(d.part(0).is_zero());
        assert_eq!(d.part(1), &p("x2", 3));

        let d = kuran_decompose(&hh("x1^2 - x2^2", 3)).unwrap();
        assert_eq!(d.part(0), &Polynomial::one(3));
        assert!(d.part(1).is_zero());
        assert_eq!(d.part(2), &p("-1/2 x2^2 + 1/2 x3^2", 3));
    }

    #[test]
    fn parts_are_orthogonal() {
        let h = hh("x1^3 - 3 x1 x2^2 + x2^2 x3 - 1/3 x3^3 + x1 x2 x3", 3);
        let d = kuran_decompose(&h).unwrap();
        let r = Radius::from_ratio(3, 2).unwrap();
        let terms: Vec<_> = (0..=3).map(|p| d.term(p).unwrap()).collect();
        for a in 0..4 {
            for b in (a + 1)..4 {
                assert!(inner_product(&terms[a], &terms[b], &r).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn json_layout() {
        let d = kuran_decompose(&hh("x1 x2", 3)).unwrap();
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["m"], 2);
        assert_eq!(v["N"], 3);
        assert_eq!(v["parts"][1]["p"], 1);
        assert_eq!(v["parts"][1]["u_p"], "1/1 * x1^0 x2^1 x3^0");
        assert_eq!(v["parts"][0]["u_p"], "0");
    }

    #[test]
    fn constant_and_two_dimensions() {
        let d = kuran_decompose(&HomogeneousHarmonic::new(Polynomial::one(2), 0).unwrap()).unwrap();
        assert_eq!(d.part(0), &Polynomial::one(2));
        // in R^2, H_p^0 is trivial for p >= 2
        let d = kuran_decompose(&hh("x1^3 - 3 x1 x2^2", 2)).unwrap();
        assert_eq!(d.part(0), &Polynomial::one(2));
        let d = kuran_decompose(&hh("3 x1^2 x2 - x2^3", 2)).unwrap();
        assert_eq!(d.part(1), &p("3 x2", 2));
    }
}
