//! The construction: dense sequence, step sizes `ℓ_k`, index sets, blocks
//! and truncations of `h = Σ_n Q_n`.

mod blocks;
mod dense;
mod ell;
mod truncated;

pub use blocks::{a_position, block_q, degree_interval, index_set_a, index_set_b, owner, BlockQ};
pub use dense::{
    coefficient_list, default_dense_sequence, explicit_dense_sequence, harmonic_basis, next_occurrence,
    schedule_offset, DensePlan, PlanEntry, GROWTH_K_MAX,
};
pub use ell::{select_ell, select_ell_relaxed, EllSequence, GrowthLemmaConstant, Scale, LITERAL_THRESHOLD};
pub use truncated::{assemble_truncated, TruncatedH};
