//! Closed-form norms of huge-degree primitives.
//!
//! `P_o(F)` for a harmonic `F = Σ_j H_j` has degree-`(o+j)` part
//! `Σ_p (j−p)!/(j−p+o)! · u_{j,p} I*_{j−p+o,N+2p}`. The summands are mutually
//! orthogonal across distinct `(degree, p)`, and
//! `M_2²(u I*_{q,N+2p}, 1) = M_2²(u, 1)/d_{q,N+2p}` for `u ∈ H_p^0`. So any
//! finite combination of primitives has
//! `M_2²(·, r) = Σ_D w_D r^{2D}` with exact rational weights, computed without
//! ever expanding `I*` of degree `o`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use super::decompose::{kuran_decompose, KuranDecomposition};
use super::dims::dim_harmonic;
use super::primitive::{falling_ratio, primitive_from_decomposition};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numeric::{float_from_rational, from_biguint, NormValue, Rational, HP_REL_ERR, PRECISION, RM};
use crate::polycalc::Polynomial;
use crate::spheremeans::{inner_product, m2_mean_squared, Radius};

#[derive(Clone, Debug)]
struct Component {
    degree: u32,
    dec: KuranDecomposition,
    /// `M_2²(u_p, 1)` per `p`.
    norms: Vec<Rational>,
}

/// A harmonic polynomial together with the Kuran decompositions of its
/// homogeneous components.
#[derive(Clone, Debug)]
pub struct KuranFamily {
    poly: Polynomial,
    components: Vec<Component>,
}

impl KuranFamily {
    pub fn new(f: &Polynomial) -> Result<Arc<Self>> {
        let one = Radius::one();
        let mut components = Vec::new();
        for h in f.homogeneous_components()? {
            let dec = kuran_decompose(&h)?;
            let norms = dec.parts().map(|(_, u)| m2_mean_squared(u, &one)).collect();
            components.push(Component {
                degree: h.degree(),
                dec,
                norms,
            });
        }
        Ok(Arc::new(KuranFamily {
            poly: f.clone(),
            components,
        }))
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn degree(&self) -> Option<u32> {
        self.poly.degree()
    }

    pub fn decompositions(&self) -> impl Iterator<Item = &KuranDecomposition> {
        self.components.iter().map(|c| &c.dec)
    }

    /// `M_2²(F, 1)`, from the decompositions.
    pub fn norm_squared(&self) -> Rational {
        PrimitiveTerm::new(Arc::new(self.clone()), 0).norm_squared(&Radius::one())
    }
}

/// `coeff · P_order(F)`.
#[derive(Clone, Debug)]
pub struct PrimitiveTerm {
    pub family: Arc<KuranFamily>,
    pub order: u64,
    pub coeff: Rational,
}

impl PrimitiveTerm {
    pub fn new(family: Arc<KuranFamily>, order: u64) -> Self {
        PrimitiveTerm {
            family,
            order,
            coeff: Rational::from_integer(1.into()),
        }
    }

    pub fn scaled(mut self, c: Rational) -> Self {
        self.coeff *= c;
        self
    }

    pub fn profile(&self) -> NormProfile {
        let mut s = HarmonicSum::new(self.family.dim());
        s.push(self.clone());
        s.profile(Exec::Sequential)
    }

    /// Exact `M_2²(coeff · P_order(F), r)`.
    pub fn norm_squared(&self, r: &Radius) -> Rational {
        self.profile().eval_exact(r)
    }

    /// Explicit polynomial; only sensible for small orders.
    pub fn expand(&self) -> Result<Polynomial> {
        let k = u32::try_from(self.order)
            .map_err(|_| Error::ExpansionTooLarge(format!("primitive order {}", self.order)))?;
        let mut out = Polynomial::zero(self.family.dim());
        for c in &self.family.components {
            out = &out + &primitive_from_decomposition(&c.dec, k)?;
        }
        Ok(out.scale(&self.coeff))
    }
}

/// `M_2²(P_n(F), r)`.
pub fn block_norm_squared(t: &PrimitiveTerm, r: &Radius) -> Rational {
    t.norm_squared(r)
}

/// A finite linear combination of primitives of harmonic polynomials.
#[derive(Clone, Debug)]
pub struct HarmonicSum {
    n: usize,
    terms: Vec<PrimitiveTerm>,
}

type FamilyKey = (usize, u32); // (family address, component index)
type GroupKey = (u64, u32); // (degree, p)
type Combo = Vec<(FamilyKey, Rational)>;

fn family_addr(f: &Arc<KuranFamily>) -> usize {
    Arc::as_ptr(f) as usize
}

impl HarmonicSum {
    pub fn new(n: usize) -> Self {
        HarmonicSum { n, terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn push(&mut self, t: PrimitiveTerm) {
        assert_eq!(t.family.dim(), self.n, "dimension mismatch");
        if !t.coeff.is_zero() && !t.family.components.is_empty() {
            self.terms.push(t);
        }
    }

    pub fn extend(&mut self, other: HarmonicSum) {
        for t in other.terms {
            self.push(t);
        }
    }

    pub fn terms(&self) -> &[PrimitiveTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `∂^s/∂x1^s` of the sum. Orders `o ≥ s` drop to `o − s`; for `o < s`
    /// the term becomes the explicit harmonic polynomial `∂^{s−o} F`.
    pub fn differentiate(&self, s: u64) -> Result<HarmonicSum> {
        let mut memo: HashMap<(usize, u64), Arc<KuranFamily>> = HashMap::new();
        let mut out = HarmonicSum::new(self.n);
        for t in &self.terms {
            if t.order >= s {
                out.push(PrimitiveTerm {
                    family: t.family.clone(),
                    order: t.order - s,
                    coeff: t.coeff.clone(),
                });
                continue;
            }
            let d = s - t.order;
            if t.family.degree().is_none_or(|deg| d > deg as u64) {
                continue;
            }
            let key = (family_addr(&t.family), d);
            let fam = match memo.get(&key) {
                Some(f) => f.clone(),
                None => {
                    let g = t.family.poly.differentiate(1, d as u32)?;
                    let f = KuranFamily::new(&g)?;
                    memo.insert(key, f.clone());
                    f
                }
            };
            out.push(PrimitiveTerm {
                family: fam,
                order: 0,
                coeff: t.coeff.clone(),
            });
        }
        Ok(out)
    }

    pub fn expand(&self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.n);
        for t in &self.terms {
            out = &out + &t.expand()?;
        }
        Ok(out)
    }

    /// Weights `w_D` with `M_2²(sum, r) = Σ_D w_D r^{2D}`, exact.
    pub fn profile(&self, exec: Exec) -> NormProfile {
        // (D, p) -> combination of u_{j,p} with exact coefficients
        let mut groups: BTreeMap<(u64, u32), Vec<(FamilyKey, Rational)>> = BTreeMap::new();
        let mut lookup: HashMap<usize, &Arc<KuranFamily>> = HashMap::new();
        for t in &self.terms {
            lookup.insert(family_addr(&t.family), &t.family);
            for (ci, c) in t.family.components.iter().enumerate() {
                let j = c.degree;
                for (p, _) in c.dec.nonzero_parts() {
                    let alpha = &t.coeff * falling_ratio((j - p) as u64, t.order);
                    let key = (family_addr(&t.family), ci as u32);
                    let entry = groups.entry((t.order + j as u64, p)).or_default();
                    match entry.iter_mut().find(|(k, _)| *k == key) {
                        Some((_, a)) => *a += alpha,
                        None => entry.push((key, alpha)),
                    }
                }
            }
        }
        let groups: Vec<(GroupKey, Combo)> = groups.into_iter().collect();
        let n = self.n as u64;
        let contributions = exec.map(&groups, |((d, p), combo)| {
            let combo: Vec<&(FamilyKey, Rational)> = combo.iter().filter(|(_, a)| !a.is_zero()).collect();
            if combo.is_empty() {
                return (*d, Rational::zero());
            }
            let part = |k: &FamilyKey| {
                let c = &lookup[&k.0].components[k.1 as usize];
                (&c.dec, &c.norms)
            };
            let mut q = Rational::zero();
            for (a, (ka, alpha)) in combo.iter().enumerate() {
                let (_, norms) = part(ka);
                q += alpha * alpha * &norms[*p as usize];
                for (kb, beta) in combo.iter().skip(a + 1).map(|x| (&x.0, &x.1)) {
                    let g = inner_product(
                        part(ka).0.part(*p),
                        part(kb).0.part(*p),
                        &Radius::one(),
                    )
                    .expect("same dimension");
                    q += Rational::from_integer(2.into()) * alpha * beta * g;
                }
            }
            let dd = from_biguint(dim_harmonic(d - *p as u64, n + 2 * *p as u64));
            (*d, q / dd)
        });
        let mut weights: BTreeMap<u64, Rational> = BTreeMap::new();
        for (d, w) in contributions {
            if !w.is_zero() {
                *weights.entry(d).or_insert_with(Rational::zero) += w;
            }
        }
        weights.retain(|_, w| !w.is_zero());
        NormProfile { n: self.n, weights }
    }
}

/// `r ↦ Σ_D w_D r^{2D}` with exact nonnegative weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormProfile {
    n: usize,
    weights: BTreeMap<u64, Rational>,
}

impl NormProfile {
    pub fn zero(n: usize) -> Self {
        NormProfile {
            n,
            weights: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &BTreeMap<u64, Rational> {
        &self.weights
    }

    pub fn min_degree(&self) -> Option<u64> {
        self.weights.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<u64> {
        self.weights.keys().next_back().copied()
    }

    /// Adds a profile of a function orthogonal to this one. Degree sets must
    /// be disjoint, which is how orthogonality is established here.
    pub fn add_disjoint(&mut self, other: &NormProfile) -> Result<()> {
        if let Some(d) = other.weights.keys().find(|d| self.weights.contains_key(d)) {
            return Err(Error::InvalidArgument(format!(
                "profiles overlap in degree {d}"
            )));
        }
        self.weights
            .extend(other.weights.iter().map(|(d, w)| (*d, w.clone())));
        Ok(())
    }

    pub fn eval_exact(&self, r: &Radius) -> Rational {
        let r2 = r.value() * r.value();
        let mut acc = Rational::zero();
        for (d, w) in &self.weights {
            acc += w * crate::numeric::pow_rational(&r2, *d);
        }
        acc
    }

    /// 256-bit evaluation. All summands are nonnegative, so the relative
    /// error stays at the level of a few roundings per term.
    pub fn eval_float(&self, r: &Radius) -> NormValue {
        let rf = float_from_rational(r.value());
        let r2 = rf.mul(&rf, PRECISION, RM);
        let mut acc = astro_float::BigFloat::from_u8(0, PRECISION);
        for (d, w) in &self.weights {
            let d = d.to_usize().expect("degree fits usize");
            let t = float_from_rational(w).mul(&r2.powi(d, PRECISION, RM), PRECISION, RM);
            acc = acc.add(&t, PRECISION, RM);
        }
        NormValue::approx(acc, HP_REL_ERR)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kuran::primitive_bound_constant;
    use crate::numeric::rat;

    fn fam(s: &str, n: usize) -> Arc<KuranFamily> {
        KuranFamily::new(&Polynomial::parse(s, Some(n)).unwrap()).unwrap()
    }

    #[test]
    fn worked_examples() {
        let t = PrimitiveTerm::new(fam("x1 x2", 3), 1);
        assert_eq!(block_norm_squared(&t, &Radius::one()), rat(1, 168));
        let one = fam("1", 3);
        for k in 0..12u64 {
            let t = PrimitiveTerm::new(one.clone(), k);
            assert_eq!(
                block_norm_squared(&t, &Radius::one()),
                primitive_bound_constant(k, 0, 3)
            );
        }
    }

    #[test]
    fn identity_primitive_matches_direct_norm() {
        let f = Polynomial::parse("2 + x1 x2 - x3 + x1^2 - x2^2", Some(3)).unwrap();
        let t = PrimitiveTerm::new(KuranFamily::new(&f).unwrap(), 0);
        for r in [Radius::one(), Radius::from_ratio(7, 3).unwrap()] {
            assert_eq!(block_norm_squared(&t, &r), m2_mean_squared(&f, &r));
        }
    }

    #[test]
    fn agrees_with_expansion() {
        let f = fam("1 + x1 x3 + x2^3 - 3 x2 x3^2", 3);
        let r = Radius::from_ratio(3, 2).unwrap();
        let mut sum = HarmonicSum::new(3);
        for (o, c) in [(3u64, rat(1, 1)), (4, rat(-2, 3)), (6, rat(5, 1))] {
            let t = PrimitiveTerm::new(f.clone(), o).scaled(c);
            assert_eq!(block_norm_squared(&t, &r), m2_mean_squared(&t.expand().unwrap(), &r));
            sum.push(t);
        }
        let exact = m2_mean_squared(&sum.expand().unwrap(), &r);
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(sum.profile(exec).eval_exact(&r), exact);
        }
    }

    #[test]
    fn derivative_cancels_exactly() {
        let f = fam("x1 + x2 x3", 3);
        let mut sum = HarmonicSum::new(3);
        sum.push(PrimitiveTerm::new(f.clone(), 5));
        sum.push(PrimitiveTerm::new(f.clone(), 2));
        let d = sum.differentiate(5).unwrap();
        // P_0(F) + ∂^3 F; subtracting F leaves only the vanishing ∂^3 F
        let mut diff = d.clone();
        diff.push(PrimitiveTerm::new(f.clone(), 0).scaled(rat(-1, 1)));
        assert!(diff.profile(Exec::Sequential).is_zero());
        assert_eq!(
            d.profile(Exec::Sequential).eval_exact(&Radius::one()),
            m2_mean_squared(f.poly(), &Radius::one())
        );
    }

    #[test]
    fn float_matches_exact() {
        let t = PrimitiveTerm::new(fam("x1 x2 + 3", 4), 900);
        let prof = t.profile();
        let r = Radius::from_ratio(40, 1).unwrap();
        let exact = prof.eval_exact(&r);
        let approx = prof.eval_float(&r);
        let e = float_from_rational(&exact);
        assert!(crate::numeric::float_rel_diff(&approx.to_float(), &e) < 1e-60);
    }
}
