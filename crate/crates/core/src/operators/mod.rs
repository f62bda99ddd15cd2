//! Hamiltonians in the Ising basis and the momentum-reduced kernels.

mod chain;
mod momentum;
mod reduced;
mod sparse;

pub use chain::{build_bond_term, build_sector_hamiltonian, BondTerm};
pub use momentum::build_momentum_block;
pub use reduced::{build_reduced_kernel, KernelMatrix, ReducedKernel};
pub use sparse::{SparseOperator, Symmetry};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Anisotropy parameter `q ∈ (0, 1]` with `Δ = (q + 1/q)/2` and
/// `α = (1 - q²)/(1 + q²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anisotropy<T> {
    q: T,
    delta: T,
    alpha: T,
}

impl<T: Real> Anisotropy<T> {
    pub fn new(q: T) -> Result<Self> {
        if !(q > T::zero() && q <= T::one()) {
            return Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1]")));
        }
        let two = T::lit(2.0);
        let delta = (q + q.recip()) / two;
        let alpha = (T::one() - q * q) / (T::one() + q * q);
        Ok(Self { q, delta, alpha })
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Quantum integer `[2]_q = q + 1/q`.
    pub fn q_two(&self) -> T {
        self.q + self.q.recip()
    }

    /// Amplitude of a nearest-neighbour hop, `-1/(2Δ)`.
    pub fn hop(&self) -> T {
        -(T::lit(2.0) * self.delta).recip()
    }

    /// `q^e` for real (typically half-integer) `e`, as `exp(e ln q)`.
    pub fn qpow(&self, e: T) -> T {
        (e * self.q.ln()).exp()
    }
}

/// Boundary condition of a finite chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition<T> {
    /// Bonds `1..L-1`, no boundary field.
    Open,
    /// Open bonds plus the kink field `-(α/2)(S³_x - S³_{x+1})` on each bond.
    Kink,
    /// Open bonds plus `(δ/2)(1 - S³_1 - S³_L)`.
    Droplet { delta: T },
    /// Ring with the wrap bond `(L, 1)`.
    Cyclic,
}

impl<T: Real> BoundaryCondition<T> {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Open => "open",
            Self::Kink => "kink",
            Self::Droplet { .. } => "droplet",
            Self::Cyclic => "cyclic",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Droplet { delta } if !delta.is_finite() => {
                Err(Error::InvalidParameter(format!("droplet field delta = {delta} is not finite")))
            }
            _ => Ok(()),
        }
    }

    /// Non-fatal remarks about the parameters.
    pub fn warnings(&self) -> Vec<String> {
        match self {
            Self::Droplet { delta } if *delta < T::one() => vec![format!(
                "droplet field delta = {delta} < 1: convergence to the droplet limit is only \
                 established for delta >= 1"
            )],
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_satisfy_projector_identity() {
        for &q in &[0.1, 0.25, 0.5, 0.8, 1.0] {
            let a = Anisotropy::<f64>::new(q).unwrap();
            assert!(a.delta() >= 1.0);
            assert!((0.0..1.0).contains(&a.alpha()));
            let s = a.alpha() * a.alpha() + 1.0 / (a.delta() * a.delta());
            assert!((s - 1.0).abs() < 1e-15);
        }
        let a = Anisotropy::<f64>::new(0.5).unwrap();
        assert!((a.hop() + 0.4).abs() < 1e-15);
        assert!((a.alpha() - 0.6).abs() < 1e-15);
        assert!((a.qpow(-0.5) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_q_outside_unit_interval() {
        assert!(Anisotropy::new(0.0).is_err());
        assert!(Anisotropy::new(1.5).is_err());
        assert!(Anisotropy::new(f64::NAN).is_err());
    }

    #[test]
    fn weak_droplet_field_warns() {
        assert!(BoundaryCondition::Droplet { delta: 0.5 }.warnings().len() == 1);
        assert!(BoundaryCondition::Droplet { delta: 1.0 }.warnings().is_empty());
        assert!(BoundaryCondition::Droplet { delta: f64::INFINITY }.validate().is_err());
    }
}
