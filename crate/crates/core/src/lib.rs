//! Numerical laboratory for the Luttinger–Sy model: a one-dimensional Bose gas
//! whose one-particle Hamiltonian is the direct sum of Dirichlet Laplacians on
//! the gaps of a Poisson point process.
//!
//! The crate is organised bottom-up:
//!
//! * [`disorder`] samples Poisson points on a box and exposes the induced
//!   interval decomposition.
//! * [`spectrum`] builds the exact Dirichlet spectrum and eigenfunctions on a
//!   realization.
//! * [`thermo`] computes exact canonical-ensemble statistics of the
//!   non-interacting gas (partition functions, occupations, condensate).
//! * [`bounds`] evaluates the inequalities and scaling conditions behind the
//!   statement that repulsive interactions destroy macroscopic occupation.
//! * [`lab`] drives Monte Carlo ensembles, configuration files and reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod bounds;
pub mod disorder;
mod error;
pub mod lab;
pub mod quadrature;
pub mod spectrum;
pub mod thermo;

pub use error::{Error, Result};

/// Formats a real with 17 significant digits, the precision used by every
/// text export in this crate.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}
