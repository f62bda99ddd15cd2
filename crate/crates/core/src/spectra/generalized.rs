use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Float;

use super::{EigenResult, Method, DENSE_MAX_DIM};
use crate::error::{Error, Result};
use crate::operators::SparseOperator;
use crate::scalar::LinalgReal;

/// Spectrum of the symmetric-definite pencil `A v = λ G v`, ascending.
///
/// `G = L Lᵀ` is Cholesky-factored and the standard problem
/// `L⁻¹ A L⁻ᵀ y = λ y` is solved densely; eigenvectors are `v = L⁻ᵀ y`.
pub fn generalized_lowest<T: LinalgReal>(a: &SparseOperator<T>, g: &SparseOperator<T>) -> Result<EigenResult<T>> {
    let n = a.nrows();
    for op in [a, g] {
        if op.nrows() != n || op.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: op.ncols() });
        }
    }
    if n == 0 {
        return Err(Error::InvalidParameter("empty pencil".into()));
    }
    if n > DENSE_MAX_DIM {
        return Err(Error::DimensionGuard { dim: n, limit: DENSE_MAX_DIM });
    }
    let am = DMatrix::<T>::from_fn(n, n, |i, j| a.get(i, j));
    let gm = DMatrix::<T>::from_fn(n, n, |i, j| g.get(i, j));
    let chol = match nalgebra::Cholesky::new(gm.clone()) {
        Some(c) => c,
        None => {
            let min = SymmetricEigen::new(gm).eigenvalues.iter().copied().fold(T::infinity(), Float::min);
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min.as_f64() });
        }
    };
    let l = chol.l();
    let x = l.solve_lower_triangular(&am).expect("nonsingular factor");
    let c = l.solve_lower_triangular(&x.transpose()).expect("nonsingular factor");
    let c = (&c + c.transpose()) * T::lit(0.5);
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).expect("finite"));
    let lt = l.transpose();
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for &i in &order {
        let lambda = eig.eigenvalues[i];
        let v = lt.solve_upper_triangular(&eig.eigenvectors.column(i).into_owned()).expect("nonsingular factor");
        let r = &am * &v - (&gm * &v) * lambda;
        residuals.push(r.norm() / v.norm());
        values.push(lambda);
        vectors.push(v.iter().copied().collect());
    }
    Ok(EigenResult {
        values,
        vectors: Some(vectors),
        residuals,
        iterations: 1,
        method: Method::Generalized,
        tol: T::epsilon() * T::from_count(n.max(16)) * Float::max(a.max_row_sum(), T::one()),
        warnings: Vec::new(),
    })
}
