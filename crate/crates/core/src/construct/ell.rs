//! Selection of the odd, strictly increasing step sizes `ℓ_k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::dense::DensePlan;
use crate::error::{Error, Result};
use crate::numeric::{ceil_integer, int, rational_to_text, Rational};

/// Operating scale of a construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    /// Blocks start at `n ≥ 10 ℓ_k`, `ℓ_k` satisfy both growth constraints.
    Literal,
    /// Small thresholds and step sizes so every block can be expanded.
    Relaxed,
}

impl Scale {
    pub fn as_str(self) -> &'static str {
        match self {
            Scale::Literal => "literal",
            Scale::Relaxed => "relaxed",
        }
    }
}

/// Literal-scale block threshold: `Q_n = 0` for `n < 10 ℓ_k`.
pub const LITERAL_THRESHOLD: u64 = 10;

/// The growth-lemma constant fed into `ℓ` selection, with where it came from.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthLemmaConstant {
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    pub provenance: String,
}

impl GrowthLemmaConstant {
    pub fn new(value: Rational, provenance: impl Into<String>) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::InvalidArgument("growth-lemma constant must be positive".into()));
        }
        Ok(GrowthLemmaConstant {
            value,
            provenance: provenance.into(),
        })
    }
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_text(r))
}

#[derive(Clone, Debug, Serialize)]
pub struct EllSequence {
    pub scale: Scale,
    /// `Q_n = 0` unless `n ≥ threshold · ℓ_k`.
    pub threshold: u64,
    #[serde(rename = "C", serialize_with = "ser_rational")]
    pub c: Rational,
    #[serde(rename = "C_prime")]
    pub c_prime: Option<GrowthLemmaConstant>,
    ells: Vec<u64>,
    /// `Σ_{k ≤ k_max} c_{m_k}² M_2²(F_k,1)/ℓ_k`.
    #[serde(serialize_with = "ser_rational")]
    pub choice_sum: Rational,
    /// `C²/C′`; infinite (absent) on the relaxed scale.
    #[serde(serialize_with = "ser_opt_rational")]
    pub choice_limit: Option<Rational>,
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&rational_to_text(r)),
        None => s.serialize_none(),
    }
}

impl EllSequence {
    pub fn k_max(&self) -> u64 {
        self.ells.len() as u64
    }

    pub fn ells(&self) -> &[u64] {
        &self.ells
    }

    pub fn ell(&self, k: u64) -> Result<u64> {
        if k == 0 || k > self.k_max() {
            return Err(Error::InvalidArgument(format!(
                "ell_{k} outside the selected range 1..={}",
                self.k_max()
            )));
        }
        Ok(self.ells[(k - 1) as usize])
    }

    /// A lower bound for `ℓ_k` valid for every `k`, also past `k_max`, since
    /// the sequence is odd and strictly increasing.
    pub fn ell_lower_bound(&self, k: u64) -> u64 {
        match self.ell(k) {
            Ok(l) => l,
            Err(_) => {
                let last = self.ells.last().copied().unwrap_or(1);
                last.saturating_add(2 * k.saturating_sub(self.k_max()))
            }
        }
    }

    /// Builds a relaxed-scale sequence from explicit values.
    pub fn relaxed(ells: Vec<u64>, threshold: u64) -> Result<Self> {
        check_shape(&ells)?;
        Ok(EllSequence {
            scale: Scale::Relaxed,
            threshold,
            c: int(1),
            c_prime: None,
            ells,
            choice_sum: Rational::zero(),
            choice_limit: None,
        })
    }

    /// Literal-scale sequence from explicit values, checked against both
    /// constraints for the plan entries it covers.
    pub fn literal_checked(plan: &DensePlan, c: &Rational, c_prime: GrowthLemmaConstant, ells: Vec<u64>) -> Result<Self> {
        check_shape(&ells)?;
        let mut sum = Rational::zero();
        for (e, &l) in plan.entries().iter().zip(&ells) {
            let need = growth_floor(e.m_k, &e.c_squared, &e.norm2, e.k);
            if Rational::from_integer(l.into()) < need {
                return Err(Error::EllUnsatisfiable(format!(
                    "ell_{} = {l} is below 2 m_k + c^2 2^k (M^2 + 1) = {}",
                    e.k,
                    rational_to_text(&need)
                )));
            }
            sum += &e.c_squared * &e.norm2 / Rational::from_integer(l.into());
        }
        let limit = c * c / &c_prime.value;
        if sum > limit {
            return Err(Error::EllUnsatisfiable(format!(
                "sum c^2 M^2 / ell = {} exceeds C^2/C' = {}",
                rational_to_text(&sum),
                rational_to_text(&limit)
            )));
        }
        Ok(EllSequence {
            scale: Scale::Literal,
            threshold: LITERAL_THRESHOLD,
            c: c.clone(),
            c_prime: Some(c_prime),
            ells,
            choice_sum: sum,
            choice_limit: Some(limit),
        })
    }
}

fn check_shape(ells: &[u64]) -> Result<()> {
    for (i, &l) in ells.iter().enumerate() {
        if l.is_even() {
            return Err(Error::SequenceShape(format!("odd: ell_{} = {l}", i + 1)));
        }
        if i > 0 && l <= ells[i - 1] {
            return Err(Error::SequenceShape(format!("strictly increasing at k = {}", i + 1)));
        }
    }
    Ok(())
}

/// `2 m_k + c_{m_k}² 2^k (M_2²(F_k,1) + 1)`.
fn growth_floor(m: u32, c2: &Rational, norm2: &Rational, k: u64) -> Rational {
    let two_k = Rational::from_integer(BigInt::one() << k as usize);
    int(2 * m as i64) + c2 * two_k * (norm2 + int(1))
}

fn smallest_odd_at_least(r: &Rational) -> BigInt {
    let mut c = ceil_integer(r).max(BigInt::one());
    if c.is_even() {
        c += 1;
    }
    c
}

/// Literal-scale selection. For each `k ≤ k_max`, `ℓ_k` is the smallest odd
/// integer that
/// - is at least `2 m_k + c_{m_k}² 2^k (M_2²(F_k,1) + 1)`,
/// - is at least `c_{m_k}² M_2²(F_k,1) 2^k C′/C²`,
/// - exceeds `ℓ_{k−1}`.
///
/// The second bound makes the `k`-th summand of `Σ c² M²/ℓ_k` at most
/// `2^{−k} C²/C′`, so the whole series, including every `k > k_max` chosen by
/// the same rule, stays below `C²/C′`.
pub fn select_ell(plan: &DensePlan, c: &Rational, c_prime: GrowthLemmaConstant, k_max: u64) -> Result<EllSequence> {
    if !c.is_positive() {
        return Err(Error::InvalidArgument("C must be positive".into()));
    }
    if k_max > plan.k_max() {
        return Err(Error::InvalidArgument(format!(
            "k_max = {k_max} exceeds the plan horizon {}",
            plan.k_max()
        )));
    }
    let scale = &c_prime.value / (c * c);
    let mut ells: Vec<u64> = Vec::with_capacity(k_max as usize);
    let mut sum = Rational::zero();
    for e in &plan.entries()[..k_max as usize] {
        let floor = growth_floor(e.m_k, &e.c_squared, &e.norm2, e.k);
        let two_k = Rational::from_integer(BigInt::one() << e.k as usize);
        let choice = &e.c_squared * &e.norm2 * two_k * &scale;
        let prev = Rational::from_integer(ells.last().map_or(0, |&l| l + 1).into());
        let need = floor.max(choice).max(prev);
        let l = smallest_odd_at_least(&need).to_u64().ok_or_else(|| {
            Error::EllUnsatisfiable(format!("ell_{} = {} does not fit in 64 bits", e.k, ceil_integer(&need)))
        })?;
        sum += &e.c_squared * &e.norm2 / Rational::from_integer(l.into());
        ells.push(l);
    }
    let limit = c * c / &c_prime.value;
    if sum > limit {
        return Err(Error::EllUnsatisfiable(format!(
            "sum c^2 M^2 / ell = {} exceeds C^2/C' = {}",
            rational_to_text(&sum),
            rational_to_text(&limit)
        )));
    }
    Ok(EllSequence {
        scale: Scale::Literal,
        threshold: LITERAL_THRESHOLD,
        c: c.clone(),
        c_prime: Some(c_prime),
        ells,
        choice_sum: sum,
        choice_limit: Some(limit),
    })
}

/// Relaxed-scale default: `ℓ_k = 2k − 1`, threshold 1.
pub fn select_ell_relaxed(k_max: u64) -> EllSequence {
    EllSequence::relaxed((1..=k_max).map(|k| 2 * k - 1).collect(), 1).expect("odd and increasing")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::dense::{default_dense_sequence, explicit_dense_sequence};
    use crate::numeric::rat;
    use crate::polycalc::Polynomial;

    fn cp(v: Rational) -> GrowthLemmaConstant {
        GrowthLemmaConstant::new(v, "test").unwrap()
    }

    #[test]
    fn first_step_for_constant_generator() {
        let plan = explicit_dense_sequence(3, vec![Polynomial::one(3)], 4).unwrap();
        let ell = select_ell(&plan, &int(1000), cp(int(1)), 4).unwrap();
        assert_eq!(ell.ell(1).unwrap(), 5);
        assert_eq!(ell.ells(), &[5, 9, 17, 33]);
    }

    #[test]
    fn choice_constraint_binds_for_small_c() {
        let plan = explicit_dense_sequence(3, vec![Polynomial::one(3)], 3).unwrap();
        let ell = select_ell(&plan, &rat(1, 10), cp(int(3)), 3).unwrap();
        // 1 * 1 * 2 * 3 / (1/100) = 600
        assert_eq!(ell.ell(1).unwrap(), 601);
        assert!(ell.choice_sum <= *ell.choice_limit.as_ref().unwrap());
    }

    #[test]
    fn default_plan_is_increasing_and_within_budget() {
        let plan = default_dense_sequence(3, 2, 1, 12).unwrap();
        let ell = select_ell(&plan, &int(1), cp(rat(5, 2)), 12).unwrap();
        for w in ell.ells().windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(ell.ells().iter().all(|l| l % 2 == 1));
        assert!(ell.choice_sum <= *ell.choice_limit.as_ref().unwrap());
        assert!(ell.ell_lower_bound(20) >= ell.ell(12).unwrap() + 16);
    }

    #[test]
    fn shape_and_constraint_errors() {
        assert!(EllSequence::relaxed(vec![1, 4], 1).is_err());
        assert!(EllSequence::relaxed(vec![3, 3], 1).is_err());
        let plan = explicit_dense_sequence(3, vec![Polynomial::one(3)], 2).unwrap();
        assert!(matches!(
            EllSequence::literal_checked(&plan, &int(1), cp(int(1)), vec![3, 9]),
            Err(Error::EllUnsatisfiable(_))
        ));
        assert!(EllSequence::literal_checked(&plan, &int(1), cp(int(1)), vec![5, 9]).is_ok());
    }
}
