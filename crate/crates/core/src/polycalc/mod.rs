//! Exact multivariate polynomials over big rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`] under graded
//! lexicographic order, so iteration (and therefore every serialized form)
//! is deterministic. The zero polynomial is the empty map and has no degree.

mod text;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Exponent vector `α ∈ N^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, axis0: usize) -> u32 {
        self.0[axis0]
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then exponents
    /// lexicographically (so `x1^2 > x1 x2 > x2^2`).
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(dim);
        p.add_term(Monomial::one(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Polynomial::constant(dim, Rational::one())
    }

    /// The coordinate `x_axis` (1-based).
    pub fn var(dim: usize, axis: usize) -> Result<Self> {
        check_axis(axis, dim)?;
        let mut e = vec![0; dim];
        e[axis - 1] = 1;
        Ok(Polynomial::monomial(Monomial(e), Rational::one()))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(m.dim());
        p.add_term(m, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; repeated monomials add.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Polynomial::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.dim);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn check_same_dim(&self, other: &Polynomial) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// `(L, [(α, c_α L)])` with `L` the lcm of the denominators.
    fn integer_terms(&self) -> (BigInt, Vec<(&Monomial, BigInt)>) {
        let l = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = self.terms.iter().map(|(m, c)| (m, c.numer() * (&l / c.denom()))).collect();
        (l, terms)
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_dim(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_dim(other)?;
        Ok(self * other)
    }

    /// Iterated partial derivative `∂^order / ∂x_axis^order` (axis 1-based).
    pub fn differentiate(&self, axis: usize, order: u32) -> Result<Polynomial> {
        check_axis(axis, self.dim)?;
        let a = axis - 1;
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[a];
            if e < order {
                continue;
            }
            // falling factorial e (e-1) ... (e-order+1)
            let mut f = num_bigint::BigInt::one();
            for i in 0..order {
                f *= e - i;
            }
            let mut nm = m.clone();
            nm.0[a] -= order;
            out.add_term(nm, c * Rational::from_integer(f));
        }
        Ok(out)
    }

    pub fn laplacian(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            for a in 0..self.dim {
                let e = m.0[a];
                if e >= 2 {
                    let mut nm = m.clone();
                    nm.0[a] -= 2;
                    out.add_term(nm, c * Rational::from_integer((e * (e - 1)).into()));
                }
            }
        }
        out
    }

    pub fn is_harmonic(&self) -> bool {
        self.laplacian().is_zero()
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.min_degree(), self.degree()) {
            (Some(lo), Some(hi)) => lo == hi,
            _ => true,
        }
    }

    /// True when some monomial carries a positive power of `x_axis` (1-based).
    pub fn depends_on(&self, axis: usize) -> bool {
        self.terms.keys().any(|m| m.0[axis - 1] > 0)
    }

    /// The degree-`d` part.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits a harmonic polynomial into its homogeneous components (one per
    /// degree present, ascending). Each component of a harmonic polynomial is
    /// itself harmonic; the first failing degree is reported otherwise.
    pub fn homogeneous_components(&self) -> Result<Vec<HomogeneousHarmonic>> {
        let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree())
                .or_insert_with(|| Polynomial::zero(self.dim))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts
            .into_iter()
            .map(|(degree, poly)| {
                if poly.is_harmonic() {
                    Ok(HomogeneousHarmonic { degree, poly })
                } else {
                    Err(Error::NotHarmonic { degree })
                }
            })
            .collect()
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Converts to a float evaluator (used only for sampling sup-norms).
    pub fn to_f64_evaluator(&self) -> F64Polynomial {
        F64Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.0.clone(), c.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        }
    }

    /// Sum of `|c| * |α|`-weighted coefficients; with `r` gives a Lipschitz
    /// bound on `S(r)`.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY).abs())
            .sum()
    }
}

fn check_axis(axis: usize, dim: usize) -> Result<()> {
    if axis == 0 || axis > dim {
        return Err(Error::AxisOutOfRange { axis, dim });
    }
    Ok(())
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        // integer products over the common denominator, reduced once per term
        let (la, ia) = self.integer_terms();
        let (lb, ib) = rhs.integer_terms();
        let den = la * lb;
        let finish = |acc: Vec<(Monomial, BigInt)>| Polynomial {
            dim: self.dim,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Rational::new(c, den.clone())))
                .collect(),
        };
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.len() * rhs.len());
        for (a, ca) in &ia {
            for (b, cb) in &ib {
                *acc.entry(a.mul(b)).or_default() += ca * cb;
            }
        }
        finish(acc.into_iter().collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Polynomial::parse(&s, None).map_err(serde::de::Error::custom)
    }
}

/// Float copy of a polynomial, for sampling only.
#[derive(Clone, Debug)]
pub struct F64Polynomial {
    dim: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl F64Polynomial {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= xi.powi(k as i32);
                }
            }
            acc += t;
        }
        acc
    }
}

/// A homogeneous harmonic polynomial of a fixed degree (element of `H_m`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneousHarmonic {
    degree: u32,
    poly: Polynomial,
}

impl HomogeneousHarmonic {
    /// Validates homogeneity of degree `degree` and harmonicity.
    pub fn new(poly: Polynomial, degree: u32) -> Result<Self> {
        if poly.terms.keys().any(|m| m.degree() != degree) {
            return Err(Error::NotHomogeneous(degree));
        }
        if !poly.is_harmonic() {
            return Err(Error::NotHarmonic { degree });
        }
        Ok(HomogeneousHarmonic { degree, poly })
    }

    /// Infers the degree; the zero polynomial needs [`HomogeneousHarmonic::new`].
    pub fn from_poly(poly: Polynomial) -> Result<Self> {
        let d = poly.degree().ok_or_else(|| {
            Error::InvalidArgument("zero polynomial has no degree; pass it explicitly".into())
        })?;
        HomogeneousHarmonic::new(poly, d)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn into_poly(self) -> Polynomial {
        self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim
    }
}
