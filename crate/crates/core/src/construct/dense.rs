//! The dense sequence `(F_k)` of harmonic polynomials.
//!
//! Enumeration contract:
//! 1. Basis: for each degree `0..=degree_cap`, the orthogonal basis of
//!    `H_m(R^N)` obtained recursively as `u · I*_{m−p,N+2p}` with `u` running
//!    over the same kind of basis in `x2..xN` (degree `p`, ascending), and in
//!    one variable `{1, x}`. Basis elements are listed by degree, then by
//!    construction order.
//! 2. Coefficients of height `h = 1, 2, …, coefficient_height`: first
//!    `±h/q` for `q < h` coprime (ascending `q`, integers first), then
//!    `±p/h` for `p < h` coprime (ascending `p`); each value is followed by
//!    its negative. So the list starts `1, −1, 2, −2, 1/2, −1/2, 3, …`.
//! 3. The generating set `G` lists nonempty supports by size, supports of a
//!    given size in lexicographic order of basis indices, then coefficient
//!    tuples with the first basis index varying slowest. Element 0 is `1`.
//! 4. Schedule: with `k' = k − 1` and `t` maximal with `T(t) = t(t+1)/2 ≤ k'`,
//!    `F_k = G[(k' − T(t)) mod |G|]`. This walks `0; 0,1; 0,1,2; …` so every
//!    element of `G` recurs infinitely often, and `F_1 = F_2 = 1`.

use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kuran::{axial_poly_at, growth_constant_certificate, KuranFamily};
use crate::numeric::{binomial, rational_to_text, NormValue, Rational};
use crate::polycalc::{Monomial, Polynomial};
use crate::spheremeans::{m2_mean_squared, Radius};

/// `k_max` handed to the growth-constant certificate.
pub const GROWTH_K_MAX: u64 = 64;

/// Orthogonal basis of `H_m` in variables `first..n` (0-based) of `R^n`.
fn basis_from(n: usize, first: usize, m: u32) -> Vec<Polynomial> {
    let d = n - first;
    if d == 1 {
        return match m {
            0 => vec![Polynomial::one(n)],
            1 => {
                let mut e = vec![0; n];
                e[first] = 1;
                vec![Polynomial::monomial(Monomial::new(e), Rational::one())]
            }
            _ => vec![],
        };
    }
    let mut out = Vec::new();
    for p in 0..=m {
        let axial = axial_poly_at(first, m - p, n, d + 2 * p as usize);
        for u in basis_from(n, first + 1, p) {
            out.push(&u * &axial);
        }
    }
    out
}

/// Orthogonal basis of `H_m(R^N)` with `d_{m,N}` elements.
pub fn harmonic_basis(n: usize, m: u32) -> Vec<Polynomial> {
    basis_from(n, 0, m)
}

/// Coefficient list of rule 2 in the module docs.
pub fn coefficient_list(height: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut push = |p: u64, q: u64| {
        let r = Rational::new(p.into(), q.into());
        out.push(r.clone());
        out.push(-r);
    };
    for h in 1..=height {
        for q in 1..h.max(2) {
            if h.gcd(&q) == 1 {
                push(h, q);
            }
        }
        for p in 1..h {
            if p.gcd(&h) == 1 {
                push(p, h);
            }
        }
    }
    out
}

/// Position of `k ≥ 1` in the generating set, before reduction mod `|G|`.
pub fn schedule_offset(k: u64) -> u64 {
    assert!(k >= 1, "sequence is indexed from 1");
    let kp = k - 1;
    let t = triangular_root(kp);
    kp - t * (t + 1) / 2
}

fn triangular_root(x: u64) -> u64 {
    // largest t with t(t+1)/2 <= x
    let mut t = (((8.0 * x as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while t * (t + 1) / 2 > x {
        t -= 1;
    }
    while (t + 1) * (t + 2) / 2 <= x {
        t += 1;
    }
    t
}

/// Smallest `k2 > k` with `F_{k2} = F_k` by the schedule (same generating
/// index).
pub fn next_occurrence(k: u64, g_size: &BigUint) -> u64 {
    let kp = k - 1;
    let t = triangular_root(kp);
    let i = kp - t * (t + 1) / 2;
    let g = g_size.to_u64().unwrap_or(u64::MAX);
    if i.checked_add(g).is_some_and(|x| x <= t) {
        return k + g;
    }
    let i0 = i % g;
    (t + 1) * (t + 2) / 2 + i0 + 1
}

#[derive(Clone, Debug)]
enum Source {
    Enumerated {
        coefficient_height: u64,
        degree_cap: u32,
        basis: Vec<Polynomial>,
        coeffs: Vec<Rational>,
    },
    Explicit(Vec<Polynomial>),
}

/// One `F_k` with the data the construction needs.
#[derive(Clone, Debug, Serialize)]
pub struct PlanEntry {
    pub k: u64,
    #[serde(rename = "F_k")]
    pub f: Polynomial,
    pub m_k: u32,
    /// `M_2²(F_k, 1)`.
    #[serde(serialize_with = "ser_rational")]
    pub norm2: Rational,
    /// `c_{m_k}²`, exact.
    #[serde(serialize_with = "ser_rational")]
    pub c_squared: Rational,
    /// Position in the generating set.
    pub generator: u64,
    #[serde(skip)]
    pub family: Arc<KuranFamily>,
}

impl PlanEntry {
    pub fn c_mk(&self) -> NormValue {
        NormValue::exact(self.c_squared.clone()).sqrt()
    }
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_text(r))
}

/// The sequence `(F_k)_{k ≤ k_max}` plus the generating set behind it.
#[derive(Clone, Debug)]
pub struct DensePlan {
    n: usize,
    source: Source,
    g_size: BigUint,
    entries: Vec<PlanEntry>,
    /// Upper bound for `c_{m_k}² M_2²(F_k, 1)` over every element of `G`.
    k_g: Rational,
}

impl DensePlan {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[PlanEntry] {
        &self.entries
    }

    pub fn k_max(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn entry(&self, k: u64) -> Result<&PlanEntry> {
        if k == 0 || k > self.k_max() {
            return Err(Error::InvalidArgument(format!(
                "k = {k} outside the materialized range 1..={}",
                self.k_max()
            )));
        }
        Ok(&self.entries[(k - 1) as usize])
    }

    pub fn generating_set_size(&self) -> &BigUint {
        &self.g_size
    }

    /// `K_G ≥ c_{m_k}² M_2²(F_k, 1)` for every `k`, including those beyond
    /// `k_max`.
    pub fn tail_constant(&self) -> &Rational {
        &self.k_g
    }

    pub fn max_degree(&self) -> u32 {
        match &self.source {
            Source::Enumerated { degree_cap, .. } => *degree_cap,
            Source::Explicit(g) => g.iter().filter_map(|p| p.degree()).max().unwrap_or(0),
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.source, Source::Explicit(_))
    }

    pub fn generator(&self, index: u64) -> Polynomial {
        match &self.source {
            Source::Explicit(g) => g[index as usize].clone(),
            Source::Enumerated { basis, coeffs, .. } => enumerated_element(self.n, basis, coeffs, index),
        }
    }

    fn build(n: usize, source: Source, g_size: BigUint, k_g: Rational, k_max: u64) -> Result<Self> {
        let mut plan = DensePlan {
            n,
            source,
            g_size,
            entries: Vec::new(),
            k_g,
        };
        let mut fams: std::collections::HashMap<u64, (Arc<KuranFamily>, Rational, Rational)> = Default::default();
        for k in 1..=k_max {
            let off = schedule_offset(k);
            let g = plan.g_size.to_u64().map_or(off, |s| off % s);
            let f = plan.generator(g);
            let (family, norm2, c2) = match fams.get(&g) {
                Some(x) => x.clone(),
                None => {
                    let fam = KuranFamily::new(&f)?;
                    let norm2 = m2_mean_squared(&f, &Radius::one());
                    let m = f.degree().unwrap_or(0);
                    let c2 = growth_constant_certificate(m as u64, n as u64, GROWTH_K_MAX)?.c_squared;
                    fams.insert(g, (fam.clone(), norm2.clone(), c2.clone()));
                    (fam, norm2, c2)
                }
            };
            plan.entries.push(PlanEntry {
                k,
                m_k: f.degree().unwrap_or(0),
                f,
                norm2,
                c_squared: c2,
                generator: g,
                family,
            });
        }
        Ok(plan)
    }
}

fn unrank_combination(mut rank: u128, n: usize, s: usize) -> Vec<usize> {
    // lexicographic order of s-subsets of 0..n
    let mut out = Vec::with_capacity(s);
    let mut start = 0;
    for left in (1..=s).rev() {
        let mut c = start;
        loop {
            let count = binomial((n - c - 1) as u64, (left - 1) as u64).to_u128().unwrap_or(u128::MAX);
            if rank < count {
                break;
            }
            rank -= count;
            c += 1;
        }
        out.push(c);
        start = c + 1;
    }
    out
}

fn enumerated_element(n: usize, basis: &[Polynomial], coeffs: &[Rational], mut index: u64) -> Polynomial {
    let b = basis.len();
    let c = coeffs.len() as u128;
    let mut idx = index as u128;
    for s in 1..=b {
        let combos = binomial(b as u64, s as u64).to_u128().unwrap_or(u128::MAX);
        let tuples = c.checked_pow(s as u32).unwrap_or(u128::MAX);
        let count = combos.saturating_mul(tuples);
        if idx < count {
            let support = unrank_combination(idx / tuples, b, s);
            let mut t = idx % tuples;
            let mut digits = vec![0usize; s];
            for d in (0..s).rev() {
                digits[d] = (t % c) as usize;
                t /= c;
            }
            let mut out = Polynomial::zero(n);
            for (bi, ci) in support.iter().zip(&digits) {
                out = &out + &basis[*bi].scale(&coeffs[*ci]);
            }
            return out;
        }
        idx -= count;
    }
    index = 0;
    enumerated_element(n, basis, coeffs, index)
}

/// The default enumerated sequence; entries are materialized for
/// `k = 1..=k_max`.
pub fn default_dense_sequence(
    n: usize,
    coefficient_height: u64,
    degree_cap: u32,
    k_max: u64,
) -> Result<DensePlan> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    if coefficient_height == 0 {
        return Err(Error::InvalidArgument("coefficient_height must be at least 1".into()));
    }
    let basis: Vec<Polynomial> = (0..=degree_cap).flat_map(|m| harmonic_basis(n, m)).collect();
    let coeffs = coefficient_list(coefficient_height);
    let b = basis.len() as u64;
    let c = BigUint::from(coeffs.len());
    let mut g_size = BigUint::zero();
    for s in 1..=b {
        g_size += binomial(b, s) * c.pow(s as u32);
    }
    let one = Radius::one();
    let sum_norms: Rational = basis.iter().map(|p| m2_mean_squared(p, &one)).sum();
    let hmax = Rational::from_integer(coefficient_height.into());
    let c_cap = growth_constant_certificate(degree_cap as u64, n as u64, GROWTH_K_MAX)?.c_squared;
    let k_g = c_cap * &hmax * &hmax * sum_norms;
    DensePlan::build(
        n,
        Source::Enumerated {
            coefficient_height,
            degree_cap,
            basis,
            coeffs,
        },
        g_size,
        k_g,
        k_max,
    )
}

/// A plan whose generating set is the given list of harmonic polynomials,
/// scheduled by the same triangular walk.
pub fn explicit_dense_sequence(n: usize, generators: Vec<Polynomial>, k_max: u64) -> Result<DensePlan> {
    if generators.is_empty() {
        return Err(Error::SequenceShape("generating set is empty".into()));
    }
    let one = Radius::one();
    let mut k_g = Rational::zero();
    for (i, g) in generators.iter().enumerate() {
        if g.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.dim(),
            });
        }
        if !g.is_harmonic() {
            return Err(Error::SequenceShape(format!("generator {i} is not harmonic")));
        }
        let m = g.degree().unwrap_or(0) as u64;
        let c2 = growth_constant_certificate(m, n as u64, GROWTH_K_MAX)?.c_squared;
        let v = c2 * m2_mean_squared(g, &one);
        if v > k_g {
            k_g = v;
        }
    }
    let g_size = BigUint::from(generators.len());
    DensePlan::build(n, Source::Explicit(generators), g_size, k_g, k_max)
}

impl DensePlan {
    /// Parameters of an enumerated plan: `(coefficient_height, degree_cap)`.
    pub fn parameters(&self) -> Option<(u64, u32)> {
        match &self.source {
            Source::Enumerated {
                coefficient_height,
                degree_cap,
                ..
            } => Some((*coefficient_height, *degree_cap)),
            Source::Explicit(_) => None,
        }
    }
}
