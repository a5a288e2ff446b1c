//! Growth of truncations against `C e^r / r^{N/2−3/4}`, and certified tails.

use astro_float::BigFloat;
use num_traits::Zero;
use serde::Serialize;

use crate::construct::TruncatedH;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kuran::NormProfile;
use crate::numeric::{
    consts, float_from_rational, float_log2, float_rel_diff, NormValue, Rational,
    HP_REL_ERR, PRECISION, RM,
};
use crate::spheremeans::Radius;

/// The tail policy asks for `tail ≤ 2^{-40} · C² e^{2r}/r^{N−3/2}`.
pub const TAIL_POLICY_LOG2: i32 = -40;

fn bf(x: u64) -> BigFloat {
    BigFloat::from_u64(x, PRECISION)
}

/// Upper bound for `M_2²(Σ_{j ≥ n0} ∂^s Q_j, r)` (use `s = 0` for the plain
/// remainder), given `K ≥ c_{m_k}² M_2²(F_k,1)` for every `k`.
///
/// Block `j` has at most `j` terms, each a primitive of order at least
/// `o_j = j² + 1 − s` after differentiation, and for `o + 1 ≥ r`
/// `M_2²(P_o(F), r) ≤ c_m² M_2²(F,1) r^{2o}/o!²`. With
/// `g(j) = j r^{2 o_j}/o_j!²` the ratio `g(j+1)/g(j)` is at most
/// `ρ = ((n0+1)/n0) (r/(o_{n0}+1))^{2(2 n0 + 1)}` for `j ≥ n0`, so the tail is
/// `≤ K g(n0)/(1 − ρ)`. `o!` is bounded below by Stirling's
/// `√(2πo)(o/e)^o`.
pub fn tail_bound(k_g: &Rational, n0: u64, r: &Radius, s: u64) -> Result<NormValue> {
    if n0 == 0 {
        return Err(Error::InvalidArgument("n0 must be positive".into()));
    }
    if k_g.is_zero() {
        return Ok(NormValue::zero());
    }
    let sq = n0
        .checked_mul(n0)
        .ok_or_else(|| Error::TailNotCertified(format!("n0 = {n0} too large")))?;
    if sq < s {
        return Err(Error::TailNotCertified(format!("block {n0} starts below the derivative order {s}")));
    }
    let o = sq - s + 1;
    if *r.value() > Rational::from_integer((o + 1).into()) {
        return Err(Error::TailNotCertified(format!(
            "r = {r} exceeds o + 1 = {} at n0 = {n0}",
            o + 1
        )));
    }
    let p = PRECISION;
    let mut cc = consts();
    let two = bf(2);
    let ln_r = float_from_rational(r.value()).ln(p, RM, &mut cc);
    let of = bf(o);
    let ln_o = of.ln(p, RM, &mut cc);
    let two_pi_o = cc.pi(p, RM).mul(&two, p, RM).mul(&of, p, RM);
    let ln_fact = of
        .mul(&ln_o, p, RM)
        .sub(&of, p, RM)
        .add(&two_pi_o.ln(p, RM, &mut cc).div(&two, p, RM), p, RM);
    let ln_g = bf(n0)
        .ln(p, RM, &mut cc)
        .add(&bf(2 * o).mul(&ln_r, p, RM), p, RM)
        .sub(&ln_fact.mul(&two, p, RM), p, RM);
    let ln_ratio = bf(n0 + 1).div(&bf(n0), p, RM).ln(p, RM, &mut cc);
    let ln_rho = ln_ratio.add(
        &bf(2 * (2 * n0 + 1)).mul(&ln_r.sub(&bf(o + 1).ln(p, RM, &mut cc), p, RM), p, RM),
        p,
        RM,
    );
    if !ln_rho.is_negative() {
        return Err(Error::TailNotCertified(format!(
            "majorant ratio is not below 1 at n0 = {n0}, r = {r}"
        )));
    }
    let rho = ln_rho.exp(p, RM, &mut cc);
    let one = bf(1);
    let val = float_from_rational(k_g)
        .mul(&ln_g.exp(p, RM, &mut cc), p, RM)
        .div(&one.sub(&rho, p, RM), p, RM);
    // absorb rounding in the logarithms into the bound itself
    let slack = one.add(&BigFloat::from_f64(1e-40, p), p, RM);
    Ok(NormValue::approx(val.mul(&slack, p, RM), HP_REL_ERR))
}

/// `ln(C² e^{2r} / r^{N−3/2})` at 256 bits.
fn ln_bound_squared(c: &Rational, r: &Radius, n: usize) -> BigFloat {
    let p = PRECISION;
    let mut cc = consts();
    let cf = float_from_rational(c);
    let rf = float_from_rational(r.value());
    let exponent = BigFloat::from_f64(n as f64 - 1.5, p);
    cf.mul(&cf, p, RM)
        .ln(p, RM, &mut cc)
        .add(&rf.mul(&bf(2), p, RM), p, RM)
        .sub(&exponent.mul(&rf.ln(p, RM, &mut cc), p, RM), p, RM)
}

/// `C² e^{2r}/r^{N−3/2}`.
pub fn growth_bound_squared(c: &Rational, r: &Radius, n: usize) -> NormValue {
    let mut cc = consts();
    NormValue::approx(ln_bound_squared(c, r, n).exp(PRECISION, RM, &mut cc), 4.0 * HP_REL_ERR)
}

/// Smallest `n_max ≥ floor` for which the tail from `n_max + 1` meets the
/// policy at radius `r` (the largest radius of a grid).
pub fn choose_n_max(k_g: &Rational, c: &Rational, n: usize, r: &Radius, floor: u64) -> Result<u64> {
    let bound = growth_bound_squared(c, r, n).to_float();
    let mut n_max = floor.max(1);
    loop {
        if let Ok(t) = tail_bound(k_g, n_max + 1, r, 0) {
            let rel = t.to_float().div(&bound, PRECISION, RM);
            if float_log2(&rel) <= TAIL_POLICY_LOG2 as f64 || rel.is_zero() {
                return Ok(n_max);
            }
        }
        n_max += 1;
        if n_max > 1 << 20 {
            return Err(Error::TailPolicy {
                r: r.to_string(),
                detail: "no n_max below 2^20 meets the policy".into(),
            });
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub r: Radius,
    /// `M_2(h_T, r)`.
    pub m2: NormValue,
    /// Certified bound for the squared norm of everything past `n_max`.
    pub tail_squared: NormValue,
    /// `C e^r / r^{N/2−3/4}`.
    pub bound: NormValue,
    /// `(M_2²(h_T,r) + tail)^{1/2} / bound`.
    pub ratio: NormValue,
    pub log10_ratio: f64,
    pub tail_policy_met: bool,
}

impl GrowthRow {
    pub fn within(&self) -> bool {
        self.ratio.upper_f64() <= 1.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthTable {
    #[serde(rename = "N")]
    pub n: usize,
    pub n_max: u64,
    #[serde(serialize_with = "ser_rational")]
    pub c: Rational,
    pub rows: Vec<GrowthRow>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::numeric::rational_to_text(r))
}

impl GrowthTable {
    pub fn all_within(&self) -> bool {
        self.rows.iter().all(GrowthRow::within)
    }
}

/// Rows `(r, M_2(h_T,r), bound, ratio)` over a radius grid. Fails with
/// [`Error::TailPolicy`] if the certified tail past `n_max` is too large at
/// some radius.
pub fn growth_profile(h: &TruncatedH, k_g: &Rational, radii: &[Radius], c: &Rational, exec: Exec) -> Result<GrowthTable> {
    let profile = h.profile(exec)?;
    let n = h.dim();
    let rows = exec.try_map(radii, |r| growth_row(&profile, k_g, h.n_max(), r, c, n))?;
    Ok(GrowthTable {
        n,
        n_max: h.n_max(),
        c: c.clone(),
        rows,
    })
}

fn growth_row(profile: &NormProfile, k_g: &Rational, n_max: u64, r: &Radius, c: &Rational, n: usize) -> Result<GrowthRow> {
    let p = PRECISION;
    let m2sq = profile.eval_float(r);
    let tail = tail_bound(k_g, n_max + 1, r, 0)?;
    let bound_sq = growth_bound_squared(c, r, n);
    let rel = tail.to_float().div(&bound_sq.to_float(), p, RM);
    let policy = rel.is_zero() || float_log2(&rel) <= TAIL_POLICY_LOG2 as f64;
    if !policy {
        return Err(Error::TailPolicy {
            r: r.to_string(),
            detail: format!("tail/bound^2 = 2^{:.1}; raise n_max", float_log2(&rel)),
        });
    }
    let total = m2sq.to_float().add(&tail.to_float(), p, RM);
    let ratio_sq = total.div(&bound_sq.to_float(), p, RM);
    let ratio = NormValue::approx(ratio_sq, 8.0 * HP_REL_ERR).sqrt();
    let log10_ratio = float_log2(&ratio.to_float()) * std::f64::consts::LOG10_2;
    Ok(GrowthRow {
        r: r.clone(),
        m2: m2sq.sqrt(),
        tail_squared: tail,
        bound: bound_sq.sqrt(),
        ratio,
        log10_ratio,
        tail_policy_met: policy,
    })
}

/// Relative difference between exact and 256-bit evaluation of a profile.
pub fn exact_cross_check(profile: &NormProfile, r: &Radius) -> f64 {
    let exact = float_from_rational(&profile.eval_exact(r));
    let approx = profile.eval_float(r).to_float();
    float_rel_diff(&approx, &exact)
}

/// `n` log-spaced radii in `[lo, hi]`, as rationals with denominator `2^40`.
pub fn log_spaced_radii(lo: f64, hi: f64, n: usize) -> Result<Vec<Radius>> {
    if !(lo > 0.0 && hi >= lo && n >= 1) {
        return Err(Error::InvalidArgument(format!("bad radius grid [{lo}, {hi}] x {n}")));
    }
    if n == 1 {
        return Ok(vec![Radius::from_f64(lo)?]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            let x = if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            };
            Radius::from_f64(x)
        })
        .collect()
}
