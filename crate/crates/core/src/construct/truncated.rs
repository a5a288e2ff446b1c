//! Finite truncations `h_T = Σ_{n ≤ n_max} Q_n`.

use super::blocks::{block_q, BlockQ};
use super::dense::DensePlan;
use super::ell::{EllSequence, Scale};
use crate::error::Result;
use crate::exec::Exec;
use crate::kuran::{HarmonicSum, NormProfile};
use crate::numeric::{NormValue, Rational};
use crate::polycalc::Polynomial;
use crate::spheremeans::Radius;

#[derive(Clone, Debug)]
pub struct TruncatedH {
    n: usize,
    n_max: u64,
    scale: Scale,
    blocks: Vec<BlockQ>,
}

pub fn assemble_truncated(plan: &DensePlan, ell: &EllSequence, n_max: u64) -> Result<TruncatedH> {
    let mut blocks = Vec::new();
    for n in (2..=n_max).step_by(2) {
        let q = block_q(n, plan, ell)?;
        if !q.is_zero() {
            blocks.push(q);
        }
    }
    Ok(TruncatedH {
        n: plan.dim(),
        n_max,
        scale: ell.scale,
        blocks,
    })
}

impl TruncatedH {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    /// Nonzero blocks, by increasing `n`.
    pub fn blocks(&self) -> &[BlockQ] {
        &self.blocks
    }

    pub fn sum(&self) -> HarmonicSum {
        let mut s = HarmonicSum::new(self.n);
        for b in &self.blocks {
            s.extend(b.sum());
        }
        s
    }

    /// Per-block profiles (computed independently), merged by degree
    /// disjointness.
    pub fn profile(&self, exec: Exec) -> Result<NormProfile> {
        let parts = exec.map(&self.blocks, |b| b.sum().profile(Exec::Sequential));
        let mut out = NormProfile::zero(self.n);
        for p in &parts {
            out.add_disjoint(p)?;
        }
        Ok(out)
    }

    pub fn m2_squared(&self, r: &Radius, exec: Exec) -> Result<Rational> {
        Ok(self.profile(exec)?.eval_exact(r))
    }

    pub fn m2_squared_float(&self, r: &Radius, exec: Exec) -> Result<NormValue> {
        Ok(self.profile(exec)?.eval_float(r))
    }

    pub fn expand(&self) -> Result<Polynomial> {
        self.sum().expand()
    }
}
