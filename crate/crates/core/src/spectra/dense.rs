use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use num_traits::{Float, One, Zero};

use super::{EigenResult, Method};
use crate::error::{Error, Result};
use crate::operators::{SparseOperator, Symmetry};
use crate::scalar::{norm, LinalgReal, Real, Scalar};

/// Default size limit of [`dense_spectrum`].
pub const DENSE_MAX_DIM: usize = 4000;

/// Imaginary parts up to this size are dropped from non-symmetric spectra.
const IMAG_CUTOFF: f64 = 1e-9;

/// Full spectrum of a square operator of dimension at most [`DENSE_MAX_DIM`].
pub fn dense_spectrum<S>(op: &SparseOperator<S>) -> Result<EigenResult<S>>
where
    S: Scalar,
    S::Real: LinalgReal,
{
    dense_spectrum_with_limit(op, DENSE_MAX_DIM, false)
}

/// As [`dense_spectrum`] with an explicit size limit; eigenvectors are
/// returned for self-adjoint input when `want_vectors` is set.
pub fn dense_spectrum_with_limit<S>(op: &SparseOperator<S>, limit: usize, want_vectors: bool) -> Result<EigenResult<S>>
where
    S: Scalar,
    S::Real: LinalgReal,
{
    if op.nrows() != op.ncols() {
        return Err(Error::DimensionMismatch { expected: op.nrows(), got: op.ncols() });
    }
    let n = op.nrows();
    if n > limit {
        return Err(Error::DimensionGuard { dim: n, limit });
    }
    if n == 0 {
        return Ok(EigenResult {
            values: Vec::new(),
            vectors: want_vectors.then(Vec::new),
            residuals: Vec::new(),
            iterations: 0,
            method: Method::Dense,
            tol: S::Real::zero(),
            warnings: Vec::new(),
        });
    }
    match op.symmetry() {
        Symmetry::Symmetric | Symmetry::Hermitian => self_adjoint(op, want_vectors),
        Symmetry::General => general(op),
    }
}

fn self_adjoint<S>(op: &SparseOperator<S>, want_vectors: bool) -> Result<EigenResult<S>>
where
    S: Scalar,
    S::Real: LinalgReal,
{
    let n = op.nrows();
    let (values, vecs): (Vec<S::Real>, Vec<Vec<S>>) = if S::IS_COMPLEX {
        let m = DMatrix::<Complex<S::Real>>::from_fn(n, n, |i, j| op.get(i, j).to_complex());
        let e = SymmetricEigen::new(m);
        let cols = (0..n)
            .map(|c| e.eigenvectors.column(c).iter().map(|z| S::from_complex(*z).expect("complex S")).collect())
            .collect();
        (e.eigenvalues.iter().copied().collect(), cols)
    } else {
        let m = DMatrix::<S::Real>::from_fn(n, n, |i, j| op.get(i, j).re());
        let e = SymmetricEigen::new(m);
        let cols = (0..n)
            .map(|c| e.eigenvectors.column(c).iter().map(|x| S::from_real(*x)).collect())
            .collect();
        (e.eigenvalues.iter().copied().collect(), cols)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite eigenvalues"));
    let values: Vec<S::Real> = order.iter().map(|&i| values[i]).collect();
    let vecs: Vec<Vec<S>> = order.iter().map(|&i| vecs[i].clone()).collect();

    let residuals = values
        .iter()
        .zip(&vecs)
        .map(|(&l, v)| {
            let av = op.matvec(v).expect("square");
            let r: Vec<S> = av.iter().zip(v).map(|(a, x)| *a - x.scale(l)).collect();
            norm(&r) / norm(v)
        })
        .collect();
    let scale = op.max_row_sum().max(S::Real::one());
    Ok(EigenResult {
        values,
        vectors: want_vectors.then_some(vecs),
        residuals,
        iterations: 1,
        method: Method::Dense,
        tol: S::Real::epsilon() * <S::Real as Real>::from_count(n.max(16)) * scale,
        warnings: Vec::new(),
    })
}

fn general<S>(op: &SparseOperator<S>) -> Result<EigenResult<S>>
where
    S: Scalar,
    S::Real: LinalgReal,
{
    if S::IS_COMPLEX {
        return Err(Error::Symmetry("real (complex non-Hermitian spectra are not supported)"));
    }
    let n = op.nrows();
    let m = DMatrix::<S::Real>::from_fn(n, n, |i, j| op.get(i, j).re());
    let eig = m.complex_eigenvalues();
    let cutoff = <S::Real as Real>::lit(IMAG_CUTOFF);
    let mut warnings = Vec::new();
    let worst = eig.iter().map(|z| Float::abs(z.im)).fold(S::Real::zero(), Float::max);
    if worst > cutoff {
        warnings.push(format!(
            "non-symmetric spectrum has imaginary parts up to {worst:e} (> {IMAG_CUTOFF:e}); truncated to real parts"
        ));
    }
    let mut values: Vec<S::Real> = eig.iter().map(|z| z.re).collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(EigenResult {
        values,
        vectors: None,
        residuals: Vec::new(),
        iterations: 1,
        method: Method::Dense,
        tol: cutoff,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_sector_hamiltonian, Anisotropy, BoundaryCondition};
    use num_complex::Complex64;

    #[test]
    fn two_by_two_kink_block() {
        let op = SparseOperator::<f64>::from_dense(2, 2, Symmetry::Symmetric, &[0.8, -0.4, -0.4, 0.2]);
        let r = dense_spectrum(&op).unwrap();
        assert!(r.values[0].abs() < 1e-15);
        assert!((r.values[1] - 1.0).abs() < 1e-15);
        assert!(r.max_residual() < 1e-15);
    }

    #[test]
    fn identity_spectrum() {
        let r = dense_spectrum(&SparseOperator::<f64>::identity(5)).unwrap();
        assert_eq!(r.values, vec![1.0; 5]);
    }

    #[test]
    fn cyclic_single_magnon() {
        let a = Anisotropy::<f64>::new(0.5).unwrap();
        let h = build_sector_hamiltonian(4, 1, BoundaryCondition::Cyclic, &a).unwrap();
        let r = dense_spectrum(&h).unwrap();
        for (x, y) in r.values.iter().zip([0.2, 1.0, 1.0, 1.8]) {
            assert!((x - y).abs() < 1e-14, "{:?}", r.values);
        }
    }

    #[test]
    fn hermitian_input() {
        let i = Complex64::new(0.0, 1.0);
        let h = SparseOperator::from_dense(2, 2, Symmetry::Hermitian, &[Complex64::new(0.0, 0.0), i, -i, Complex64::new(0.0, 0.0)]);
        let r = dense_spectrum_with_limit(&h, 10, true).unwrap();
        assert!((r.values[0] + 1.0).abs() < 1e-15 && (r.values[1] - 1.0).abs() < 1e-15);
        assert!(r.max_residual() < 1e-15);
    }

    #[test]
    fn general_real_spectrum_and_warning() {
        let op = SparseOperator::<f64>::from_dense(2, 2, Symmetry::General, &[2.0, 1.0, 0.0, 3.0]);
        let r = dense_spectrum(&op).unwrap();
        assert!((r.values[0] - 2.0).abs() < 1e-14 && (r.values[1] - 3.0).abs() < 1e-14);
        assert!(r.warnings.is_empty());
        let rot = SparseOperator::from_dense(2, 2, Symmetry::General, &[0.0, -1.0, 1.0, 0.0]);
        assert_eq!(dense_spectrum(&rot).unwrap().warnings.len(), 1);
    }

    #[test]
    fn dimension_limit() {
        let op = SparseOperator::<f64>::identity(6);
        assert!(matches!(dense_spectrum_with_limit(&op, 5, false), Err(Error::DimensionGuard { .. })));
    }
}
