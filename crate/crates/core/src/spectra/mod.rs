//! Eigenvalue engines and spectral-theory checks.

mod dense;
mod extrapolation;
mod generalized;
mod lanczos;
mod perron;

pub use dense::{dense_spectrum, dense_spectrum_with_limit, DENSE_MAX_DIM};
pub use extrapolation::{fit_limit, ExtrapolationFit, FitModel};
pub use generalized::generalized_lowest;
pub use lanczos::{lanczos_lowest, lanczos_with, LanczosOptions};
pub use perron::{
    pf_check, pf_check_with, random_nonnegative_kernel, spectral_radius, wielandt_check,
    wielandt_check_dominated, PfOptions, PfReport, PowerOptions, SpectralRadius, WielandtReport,
};

use crate::scalar::Scalar;

/// Which engine produced an [`EigenResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Dense,
    Lanczos,
    Generalized,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Dense => "dense",
            Self::Lanczos => "lanczos",
            Self::Generalized => "generalized",
        }
    }
}

/// Lowest part of a spectrum.
///
/// When residuals are present, pair `i` satisfies
/// `‖A v_i - λ_i v_i‖ ≤ tol · ‖A‖_rowsum · ‖v_i‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult<S: Scalar> {
    /// Ascending.
    pub values: Vec<S::Real>,
    pub vectors: Option<Vec<Vec<S>>>,
    /// `‖A v - λ v‖ / ‖v‖` per value (empty when not computed).
    pub residuals: Vec<S::Real>,
    pub iterations: usize,
    pub method: Method,
    pub tol: S::Real,
    pub warnings: Vec<String>,
}

impl<S: Scalar> EigenResult<S> {
    /// Smallest eigenvalue.
    pub fn lowest(&self) -> S::Real {
        self.values[0]
    }

    /// Largest residual among the reported pairs.
    pub fn max_residual(&self) -> S::Real {
        self.residuals.iter().copied().fold(<S::Real as num_traits::Zero>::zero(), num_traits::Float::max)
    }
}
