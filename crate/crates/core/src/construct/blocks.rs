//! Index sets `A_k`, windows `B_{n,k}` and the blocks `Q_n`.

use serde::Serialize;

use super::dense::DensePlan;
use super::ell::EllSequence;
use crate::error::{Error, Result};
use crate::kuran::{HarmonicSum, PrimitiveTerm};

/// The `k` with `n ∈ A_k` candidates: the 2-adic valuation of `n`.
pub fn owner(n: u64) -> Option<u32> {
    if n == 0 || n % 2 == 1 {
        None
    } else {
        Some(n.trailing_zeros())
    }
}

/// `{(2m−1) ℓ_k 2^k : m ≥ 1} ∩ [0, limit]`.
pub fn index_set_a(k: u32, ell: &EllSequence, limit: u64) -> Result<Vec<u64>> {
    let step = ell.ell(k as u64)?.checked_shl(k).unwrap_or(u64::MAX);
    let mut out = Vec::new();
    let mut n = step;
    while n <= limit {
        out.push(n);
        match n.checked_add(2 * step) {
            Some(x) => n = x,
            None => break,
        }
    }
    Ok(out)
}

/// Position `m` with `n = (2m−1) ℓ_k 2^k`, if `n ∈ A_k`.
pub fn a_position(n: u64, k: u32, ell_k: u64) -> Option<u64> {
    let step = ell_k.checked_shl(k)?;
    if n == 0 || !n.is_multiple_of(step) {
        return None;
    }
    let q = n / step;
    (q % 2 == 1).then_some(q.div_ceil(2))
}

/// `B_{n,k} = {n² + j ℓ_k : 1 ≤ j ≤ (2m−1) 2^k}`.
pub fn index_set_b(n: u64, k: u32, ell: &EllSequence) -> Result<Vec<u64>> {
    let l = ell.ell(k as u64)?;
    a_position(n, k, l).ok_or(Error::NotInIndexSet { n, k })?;
    let threshold = ell.threshold * l;
    if n < threshold {
        return Err(Error::BelowThreshold { n, k, threshold });
    }
    let n2 = n * n;
    Ok((1..=n / l).map(|j| n2 + j * l).collect())
}

/// One block `Q_n = Σ_j P_{n²+jℓ_k}(F_k)`; empty when `Q_n = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct BlockQ {
    pub n: u64,
    pub k: Option<u32>,
    /// `m` with `n = (2m−1) ℓ_k 2^k`.
    pub position: Option<u64>,
    pub ell: Option<u64>,
    /// Primitive orders `n² + j ℓ_k`.
    pub orders: Vec<u64>,
    /// `[n², n² + n + m_k]`.
    pub degree_interval: Option<(u64, u64)>,
    #[serde(skip)]
    terms: Vec<PrimitiveTerm>,
    #[serde(skip)]
    dim: usize,
}

impl BlockQ {
    fn zero(n: u64, dim: usize) -> Self {
        BlockQ {
            n,
            k: None,
            position: None,
            ell: None,
            orders: Vec::new(),
            degree_interval: None,
            terms: Vec::new(),
            dim,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[PrimitiveTerm] {
        &self.terms
    }

    pub fn sum(&self) -> HarmonicSum {
        let mut s = HarmonicSum::new(self.dim);
        for t in &self.terms {
            s.push(t.clone());
        }
        s
    }
}

/// Builds `Q_n`. Owners past the plan horizon are accepted only when the
/// block is provably zero there.
pub fn block_q(n: u64, plan: &DensePlan, ell: &EllSequence) -> Result<BlockQ> {
    let Some(k) = owner(n) else {
        return Ok(BlockQ::zero(n, plan.dim()));
    };
    let k_max = plan.k_max().min(ell.k_max());
    if k as u64 > k_max {
        // n ∈ A_k forces n ≥ ℓ_k 2^k; the threshold needs n ≥ t ℓ_k.
        let lb = ell.ell_lower_bound(k as u64);
        let need = lb.saturating_mul(ell.threshold.max(1 << k.min(63)));
        if n < need {
            return Ok(BlockQ::zero(n, plan.dim()));
        }
        return Err(Error::BeyondHorizon {
            n,
            k,
            k_max: k_max as u32,
        });
    }
    let l = ell.ell(k as u64)?;
    let Some(pos) = a_position(n, k, l) else {
        return Ok(BlockQ::zero(n, plan.dim()));
    };
    if n < ell.threshold * l {
        return Ok(BlockQ::zero(n, plan.dim()));
    }
    let entry = plan.entry(k as u64)?;
    let upper = n * n + n + entry.m_k as u64;
    let next = (n + 1) * (n + 1);
    if upper >= next {
        return Err(Error::DegreeOverlap { n, upper, next });
    }
    let orders = index_set_b(n, k, ell)?;
    let terms = orders
        .iter()
        .map(|&o| PrimitiveTerm::new(entry.family.clone(), o))
        .collect();
    Ok(BlockQ {
        n,
        k: Some(k),
        position: Some(pos),
        ell: Some(l),
        orders,
        degree_interval: Some((n * n, upper)),
        terms,
        dim: plan.dim(),
    })
}

/// `[n², n² + n + m_k]` for a nonzero block.
pub fn degree_interval(n: u64, plan: &DensePlan, ell: &EllSequence) -> Result<(u64, u64)> {
    block_q(n, plan, ell)?
        .degree_interval
        .ok_or_else(|| Error::InvalidArgument(format!("Q_{n} is zero")))
}
