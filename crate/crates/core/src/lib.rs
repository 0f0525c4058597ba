//! Regularized minimization of degenerate gradient energies
//! `J(v) = ∫ [f(|∇v|) − v] dx` with `f` flat on `[0, sigma]`, together with
//! closed-form radial references, a-priori bounds and pointwise residuals of
//! the limiting min-form equation.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod exact;
pub mod potential;
pub mod quadrature;
pub mod regularization;
pub mod solver;
pub mod viscosity;

pub use error::{Error, Result};
pub use regularization::RegularizedPotential;
pub use potential::{
    make_congestion, make_eikonal, FenchelConjugate, Potential, PotentialModel, SecondDerivClass,
};

