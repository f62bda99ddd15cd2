use num_complex::Complex;

use super::{Anisotropy, SparseOperator, Symmetry};
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::sector_basis::GapDomain;

/// Storage of a reduced kernel: real at `θ = 0`, complex otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelMatrix<T> {
    Real(SparseOperator<T>),
    Complex(SparseOperator<Complex<T>>),
}

impl<T: Real> KernelMatrix<T> {
    pub fn dim(&self) -> usize {
        match self {
            Self::Real(op) => op.dim(),
            Self::Complex(op) => op.dim(),
        }
    }

    /// Complex copy regardless of storage.
    pub fn to_complex(&self) -> SparseOperator<Complex<T>> {
        match self {
            Self::Real(op) => op.to_complex(),
            Self::Complex(op) => op.clone(),
        }
    }

    pub fn as_real(&self) -> Option<&SparseOperator<T>> {
        match self {
            Self::Real(op) => Some(op),
            Self::Complex(_) => None,
        }
    }

    pub fn max_row_sum(&self) -> T {
        match self {
            Self::Real(op) => op.max_row_sum(),
            Self::Complex(op) => op.max_row_sum(),
        }
    }

    pub fn matvec(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        match self {
            Self::Real(op) => {
                let re: Vec<T> = x.iter().map(|z| z.re).collect();
                let im: Vec<T> = x.iter().map(|z| z.im).collect();
                let yr = op.matvec(&re)?;
                let yi = op.matvec(&im)?;
                Ok(yr.into_iter().zip(yi).map(|(a, b)| Complex::new(a, b)).collect())
            }
            Self::Complex(op) => op.matvec(x),
        }
    }
}

/// Truncated momentum-reduced kernel of the infinite chain on the gap
/// domain `{1..=n_max}^(n-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedKernel<T> {
    pub n: usize,
    pub theta: T,
    pub q: T,
    pub n_max: u32,
    pub domain: GapDomain,
    pub matrix: KernelMatrix<T>,
}

/// Builds the reduced kernel for `n` magnons at quasi-momentum `theta`.
///
/// Every magnon hops by ±1 onto a free neighbour with amplitude `-1/(2Δ)`;
/// a hop to the left carries `e^{-iθ}` and one to the right `e^{+iθ}`.
/// Targets with a gap above `n_max` are dropped.
pub fn build_reduced_kernel<T: Real>(
    n: usize,
    theta: T,
    a: &Anisotropy<T>,
    n_max: u32,
) -> Result<ReducedKernel<T>> {
    if n < 1 {
        return Err(Error::InvalidParameter("reduced kernel needs n >= 1".into()));
    }
    if n_max < 2 {
        return Err(Error::InvalidParameter(format!("gap truncation n_max = {n_max} must be >= 2")));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("theta = {theta} is not finite")));
    }
    let domain = GapDomain::new(n, n_max)?;
    let hop = a.hop();
    let matrix = if theta == T::zero() {
        KernelMatrix::Real(assemble(&domain, T::one(), hop, hop, Symmetry::Symmetric))
    } else {
        let left = Complex::from_polar(hop, -theta);
        let right = Complex::from_polar(hop, theta);
        KernelMatrix::Complex(assemble(&domain, Complex::from_real(T::one()), left, right, Symmetry::Hermitian))
    };
    Ok(ReducedKernel { n, theta, q: a.q(), n_max, domain, matrix })
}

fn assemble<S: Scalar>(domain: &GapDomain, one: S, left: S, right: S, symmetry: Symmetry) -> SparseOperator<S> {
    let n = domain.count();
    let dim = domain.dim();
    let mut gaps = vec![0u32; n - 1];
    let mut target = vec![0u32; n - 1];
    SparseOperator::from_row_fn(dim, dim, symmetry, |row, out| {
        domain.gaps_into(row, &mut gaps);
        if n == 1 {
            out.push((0, one + left + right));
            return;
        }
        // gaps[k - 2] is the distance between magnons k - 1 and k (1-based)
        let walls = gaps.iter().filter(|&&g| g >= 2).count();
        out.push((row, one.scale(<S::Real as Real>::from_count(1 + walls))));
        for k in 1..=n {
            // magnon k to the left
            if k == 1 || gaps[k - 2] >= 2 {
                target.copy_from_slice(&gaps);
                if k >= 2 {
                    target[k - 2] -= 1;
                }
                if k < n {
                    target[k - 1] += 1;
                }
                if let Some(col) = domain.rank(&target) {
                    out.push((col, left));
                }
            }
            // magnon k to the right
            if k == n || gaps[k - 1] >= 2 {
                target.copy_from_slice(&gaps);
                if k < n {
                    target[k - 1] -= 1;
                }
                if k >= 2 {
                    target[k - 2] += 1;
                }
                if let Some(col) = domain.rank(&target) {
                    out.push((col, right));
                }
            }
        }
    })
}
