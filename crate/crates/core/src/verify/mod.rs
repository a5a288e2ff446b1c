//! Checks of the frequency, residual, growth and auxiliary-lemma claims.

mod density;
mod growth;
mod lemmas;
mod residual;

pub use density::{
    boundary_profile, count_b, density_target, is_nondecreasing, lower_density, lower_density_raw, DensityReport,
};
pub use growth::{
    choose_n_max, exact_cross_check, growth_bound_squared, growth_profile, log_spaced_radii, tail_bound, GrowthRow,
    GrowthTable, TAIL_POLICY_LOG2,
};
pub use lemmas::{
    comparison_series_check, fit_growth_constant, growth_lemma_check, growth_lemma_series, is_concave_at,
    ln_series_term, log_concavity_check, poisson_bound_check, second_difference, series_term_cross_check,
    skip_lemma_check, ComparisonRow, ConcavityReport, FitGrid, GrowthLemmaFit, GrowthLemmaValue, PoissonReport,
    Shape, SkipReport, SkipSequence,
};
pub use residual::{fhc_residual, fhc_residual_expanded, residual_n_max, residual_parts, ResidualParts, ResidualReport};
