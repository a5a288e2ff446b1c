//! Exact construction of a harmonic function on R^N that is frequently
//! hypercyclic for `∂/∂x1` while keeping the sphere mean `M_2(h, r)` below
//! `C e^r / r^{N/2 - 3/4}`, together with the machinery needed to check every
//! supporting identity and estimate.
//!
//! Layout:
//! - [`polycalc`]: exact multivariate polynomials over big rationals.
//! - [`spheremeans`]: integral means on spheres, sampled sup-norms, the
//!   Poisson constant.
//! - [`kuran`]: axial harmonics, the Kuran decomposition, primitives `P_k`
//!   and the closed-form norm calculus for huge-degree primitives.
//! - [`construct`]: dense sequence, `ell_k` selection, index sets and blocks.
//! - [`verify`]: density, residual, growth and lemma checks.

#![forbid(unsafe_code)]

pub mod construct;
pub mod error;
pub mod exec;
pub mod kuran;
pub mod numeric;
pub mod polycalc;
pub mod random;
pub mod report;
pub mod spheremeans;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use numeric::{NormValue, Rational};
pub use polycalc::{HomogeneousHarmonic, Monomial, Polynomial};
pub use spheremeans::Radius;
