//! Spectral toolkit for the spin-1/2 ferromagnetic XXZ chain.
//!
//! Sector Hamiltonians for open, kink, droplet and cyclic chains, the
//! momentum-reduced kernels of the infinite chain, exact Bethe-ansatz
//! droplet states, the bracket (highest-weight) basis and the eigenvalue
//! engines used to compare them.

pub mod bethe;
pub mod brackets;
pub mod error;
pub mod operators;
pub mod scalar;
pub mod sector_basis;
pub mod spectra;

pub use error::{Error, Result};
pub use scalar::{LinalgReal, Real, Scalar};

/// Double-precision shorthands.
pub type Anisotropy64 = operators::Anisotropy<f64>;
pub type BoundaryCondition64 = operators::BoundaryCondition<f64>;
pub type RealOperator = operators::SparseOperator<f64>;
pub type ComplexOperator = operators::SparseOperator<num_complex::Complex64>;
pub type ReducedKernel64 = operators::ReducedKernel<f64>;
pub type BetheSolution64 = bethe::BetheSolution<f64>;
