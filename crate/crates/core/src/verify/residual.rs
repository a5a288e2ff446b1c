//! `M_2²(∂^s h_T − F_k, r)` for `s ∈ B_{n,k}`, split into its `F` and `G`
//! parts.

use num_traits::One;
use serde::Serialize;

use super::growth::{tail_bound, TAIL_POLICY_LOG2};
use crate::construct::{assemble_truncated, index_set_b, DensePlan, EllSequence, Scale};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kuran::{HarmonicSum, PrimitiveTerm};
use crate::numeric::{rational_to_text, NormValue, Rational, PRECISION, RM};
use crate::polycalc::Polynomial;
use crate::spheremeans::{m2_mean_squared, Radius};

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub k: u32,
    pub n: u64,
    pub s: u64,
    /// `s = n² + t ℓ_k`.
    pub t: u64,
    pub r: Radius,
    pub scale: Scale,
    pub n_max: u64,
    /// `Σ_{j=1}^{(2m−1)2^k − t} P_{j ℓ_k}(F_k)`, exact.
    pub f_part: NormValue,
    /// `Σ_{n < j ≤ n_max} ∂^s Q_j`, exact.
    pub g_part_truncated: NormValue,
    /// Certified bound for `Σ_{j > n_max} ∂^s Q_j`.
    pub g_tail: NormValue,
    /// Anything left from blocks below `n` (zero when degree intervals are
    /// disjoint), exact.
    pub lower_part: NormValue,
    /// Exact residual of the truncation.
    pub residual_squared: NormValue,
    /// Residual plus the tail bound.
    pub residual_upper: NormValue,
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub component_bound: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_text(r))
}

impl ResidualReport {
    pub fn within_bound(&self) -> bool {
        self.residual_upper.upper_f64() <= bound_f64(&self.bound)
    }

    pub fn f_within(&self) -> bool {
        self.f_part.as_rational().is_some_and(|f| *f <= self.component_bound)
    }

    pub fn g_upper(&self) -> NormValue {
        add(&self.g_part_truncated, &self.g_tail)
    }

    pub fn g_within(&self) -> bool {
        self.g_upper().upper_f64() <= bound_f64(&self.component_bound)
    }
}

fn bound_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(0.0)
}

fn add(a: &NormValue, b: &NormValue) -> NormValue {
    match (a, b) {
        (NormValue::Exact(x), NormValue::Exact(y)) => NormValue::exact(x + y),
        _ => NormValue::approx(
            a.to_float().add(&b.to_float(), PRECISION, RM),
            a.rel_err().max(b.rel_err()) * 2.0,
        ),
    }
}

/// Sums of the three parts of `∂^s h_T − F_k`.
pub struct ResidualParts {
    pub f: HarmonicSum,
    pub g: HarmonicSum,
    pub lower: HarmonicSum,
}

/// Splits `∂^s h_T − F_k` symbolically.
pub fn residual_parts(plan: &DensePlan, ell: &EllSequence, k: u32, n: u64, s: u64, n_max: u64) -> Result<ResidualParts> {
    let window = index_set_b(n, k, ell)?;
    if !window.contains(&s) {
        return Err(Error::NotInWindow { s, n, k });
    }
    if n_max < n + 2 {
        return Err(Error::InvalidArgument(format!("n_max = {n_max} must be at least n + 2 = {}", n + 2)));
    }
    let h = assemble_truncated(plan, ell, n_max)?;
    let dim = plan.dim();
    let (mut f, mut g, mut lower) = (HarmonicSum::new(dim), HarmonicSum::new(dim), HarmonicSum::new(dim));
    for b in h.blocks() {
        let d = b.sum().differentiate(s)?;
        match b.n.cmp(&n) {
            std::cmp::Ordering::Less => lower.extend(d),
            std::cmp::Ordering::Equal => f.extend(d),
            std::cmp::Ordering::Greater => g.extend(d),
        }
    }
    let entry = plan.entry(k as u64)?;
    f.push(PrimitiveTerm::new(entry.family.clone(), 0).scaled(-Rational::one()));
    Ok(ResidualParts { f, g, lower })
}

/// Smallest `n_max ≥ n + 2` whose certified tail past `n_max` is below
/// `2^{-40}` of the component bound `1/(2ℓ_k²)`.
pub fn residual_n_max(plan: &DensePlan, ell: &EllSequence, k: u32, n: u64, s: u64, r: &Radius) -> Result<u64> {
    let l = ell.ell(k as u64)?;
    let limit = 1.0 / (2.0 * (l * l) as f64) * 2f64.powi(TAIL_POLICY_LOG2);
    let mut n_max = n + 2;
    loop {
        if let Ok(t) = tail_bound(plan.tail_constant(), n_max + 1, r, s) {
            if t.upper_f64() <= limit {
                return Ok(n_max);
            }
        }
        n_max += 1;
        if n_max > n + (1 << 16) {
            return Err(Error::TailPolicy {
                r: r.to_string(),
                detail: format!("no n_max up to n + 2^16 certifies the tail at s = {s}"),
            });
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn fhc_residual(
    plan: &DensePlan,
    ell: &EllSequence,
    k: u32,
    n: u64,
    s: u64,
    r: &Radius,
    n_max: u64,
    exec: Exec,
) -> Result<ResidualReport> {
    let l = ell.ell(k as u64)?;
    if ell.scale == Scale::Literal {
        // the estimate needs ℓ_k ≥ (e r)²
        let er = std::f64::consts::E * r.to_f64();
        if (l as f64) < er * er * (1.0 + 1e-12) {
            return Err(Error::RadiusTooLarge { k, ell: l, er2: er * er });
        }
    }
    let parts = residual_parts(plan, ell, k, n, s, n_max)?;
    let eval = |sum: &HarmonicSum| sum.profile(exec).eval_exact(r);
    let fv = eval(&parts.f);
    let gv = eval(&parts.g);
    let lv = eval(&parts.lower);
    let mut all = HarmonicSum::new(plan.dim());
    all.extend(parts.f);
    all.extend(parts.g);
    all.extend(parts.lower);
    let total = eval(&all);
    let tail = tail_bound(plan.tail_constant(), n_max + 1, r, s)?;
    let upper = add(&NormValue::exact(total.clone()), &tail);
    let l2 = Rational::from_integer((l * l).into());
    Ok(ResidualReport {
        k,
        n,
        s,
        t: (s - n * n) / l,
        r: r.clone(),
        scale: ell.scale,
        n_max,
        f_part: NormValue::exact(fv),
        g_part_truncated: NormValue::exact(gv),
        g_tail: tail,
        lower_part: NormValue::exact(lv),
        residual_squared: NormValue::exact(total),
        residual_upper: upper,
        bound: Rational::one() / &l2,
        component_bound: Rational::one() / (l2 * Rational::from_integer(2.into())),
    })
}

/// The same residual from explicit polynomials: expand `h_T`, differentiate,
/// subtract `F_k`, integrate. Only for small degrees.
pub fn fhc_residual_expanded(
    plan: &DensePlan,
    ell: &EllSequence,
    k: u32,
    n: u64,
    s: u64,
    r: &Radius,
    n_max: u64,
) -> Result<Rational> {
    let window = index_set_b(n, k, ell)?;
    if !window.contains(&s) {
        return Err(Error::NotInWindow { s, n, k });
    }
    let h = assemble_truncated(plan, ell, n_max)?.expand()?;
    let order = u32::try_from(s).map_err(|_| Error::ExpansionTooLarge(format!("s = {s}")))?;
    let d: Polynomial = h.differentiate(1, order)?;
    let res = &d - &plan.entry(k as u64)?.f;
    Ok(m2_mean_squared(&res, r))
}
