//! Harmonic-space dimensions, axial harmonics, the Kuran decomposition, the
//! primitive maps `P_k`, and closed-form norms of primitives.

mod axial;
mod blocknorm;
mod decompose;
mod dims;
mod primitive;

pub(crate) use axial::axial_poly_at;
pub use axial::{axial_coefficients, axial_harmonic, restrict_axial, rho_power, AxialHarmonic};
pub use blocknorm::{block_norm_squared, HarmonicSum, KuranFamily, NormProfile, PrimitiveTerm};
pub use decompose::{kuran_decompose, KuranDecomposition};
pub use dims::{
    dim_harmonic, growth_constant, growth_constant_certificate, growth_ratio_term,
    primitive_bound_constant, Eventually, GrowthCertificate,
};
pub use primitive::{falling_ratio, primitive, primitive_from_decomposition, primitive_poly};
