use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Float, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EigenResult, Method};
use crate::error::{Error, Result};
use crate::operators::SparseOperator;
use crate::scalar::{axpy, dot, norm, LinalgReal, Real, Scalar};

/// Settings of [`lanczos_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Number of lowest eigenvalues wanted.
    pub k: usize,
    /// Relative residual target: `‖A v - λ v‖ ≤ tol · ‖A‖_rowsum`.
    pub tol: f64,
    /// Largest Krylov basis kept in memory.
    pub max_basis: usize,
    pub max_restarts: usize,
    pub want_vectors: bool,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { k: 1, tol: 1e-10, max_basis: 40, max_restarts: 5000, want_vectors: false }
    }
}

/// `k` lowest eigenvalues of a self-adjoint operator.
pub fn lanczos_lowest<S>(op: &SparseOperator<S>, k: usize, tol: f64) -> Result<EigenResult<S>>
where
    S: Scalar,
    S::Real: LinalgReal,
{
    lanczos_with(op, LanczosOptions { k, tol, ..Default::default() })
}

/// Thick-restart Lanczos with full reorthogonalization.
///
/// The start vector is all ones. When the Krylov space becomes invariant a
/// fixed-seed random vector continues the basis, so runs are reproducible.
pub fn lanczos_with<S>(op: &SparseOperator<S>, opts: LanczosOptions) -> Result<EigenResult<S>>
where
    S: Scalar,
    S::Real: LinalgReal,
{
    if !op.is_self_adjoint() {
        return Err(Error::Symmetry("self-adjoint"));
    }
    let n = op.dim();
    if opts.k == 0 || opts.k > n {
        return Err(Error::InvalidParameter(format!("k = {} must lie in 1..={n}", opts.k)));
    }
    let one = S::Real::one();
    let norm_a = op.max_row_sum().max(S::Real::min_positive_value());
    let tol = <S::Real as Real>::lit(opts.tol);
    let m = opts.max_basis.max(opts.k + 2).min(n);
    let breakdown = S::Real::epsilon() * norm_a * <S::Real as Real>::lit(64.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let inv = one / <S::Real as Real>::from_count(n).sqrt();
    let mut basis: Vec<Vec<S>> = vec![vec![S::from_real(inv); n]];
    let mut t = DMatrix::<S::Real>::zeros(m, m);
    let mut kept = 0;
    let mut w = vec![S::zero(); n];
    let mut iterations = 0;

    for restart in 0..=opts.max_restarts {
        let mut tail = S::Real::zero();
        let mut size = m;
        for j in kept..m {
            op.matvec_into(&basis[j], &mut w)?;
            iterations += 1;
            let mut alpha = S::Real::zero();
            for pass in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let c = dot(v, &w);
                    if pass == 0 && i == j {
                        alpha = c.re();
                    }
                    axpy(-c, v, &mut w);
                }
            }
            t[(j, j)] = alpha;
            let beta = norm(&w);
            if j + 1 == m {
                tail = beta;
                break;
            }
            if beta > breakdown {
                t[(j, j + 1)] = beta;
                t[(j + 1, j)] = beta;
                let s = one / beta;
                basis.push(w.iter().map(|x| x.scale(s)).collect());
            } else {
                // invariant subspace: continue with a fresh orthogonal direction
                match fresh_direction(&basis, &mut rng) {
                    Some(v) => basis.push(v),
                    None => {
                        size = j + 1;
                        break;
                    }
                }
            }
        }

        let sub = t.view((0, 0), (size, size)).into_owned();
        let eig = SymmetricEigen::new(sub);
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).expect("finite"));
        let estimates: Vec<S::Real> =
            order.iter().map(|&i| Float::abs(tail * eig.eigenvectors[(size - 1, i)]) / norm_a).collect();
        let converged = estimates[..opts.k].iter().all(|&r| r <= tol);

        if converged || restart == opts.max_restarts || size < m {
            let values: Vec<S::Real> = order[..opts.k].iter().map(|&i| eig.eigenvalues[i]).collect();
            let ritz: Vec<Vec<S>> = order[..opts.k]
                .iter()
                .map(|&i| combine(&basis[..size], eig.eigenvectors.column(i).iter().copied()))
                .collect();
            let residuals: Vec<S::Real> = values
                .iter()
                .zip(&ritz)
                .map(|(&l, v)| {
                    let mut av = op.matvec(v).expect("square");
                    axpy(-S::from_real(l), v, &mut av);
                    norm(&av) / norm(v)
                })
                .collect();
            let worst = residuals.iter().copied().fold(S::Real::zero(), Float::max);
            if worst > tol * norm_a * <S::Real as Real>::lit(10.0) {
                return Err(Error::NoConvergence {
                    method: "lanczos",
                    iterations,
                    residual: (worst / norm_a).as_f64(),
                });
            }
            return Ok(EigenResult {
                values,
                vectors: opts.want_vectors.then_some(ritz),
                residuals,
                iterations,
                method: Method::Lanczos,
                tol: tol * <S::Real as Real>::lit(10.0),
                warnings: Vec::new(),
            });
        }

        // thick restart: keep the lowest Ritz vectors plus the residual direction
        let p = (opts.k + (m - opts.k) / 2).min(m - 1);
        let mut next: Vec<Vec<S>> = order[..p]
            .iter()
            .map(|&i| combine(&basis, eig.eigenvectors.column(i).iter().copied()))
            .collect();
        t.fill(S::Real::zero());
        for (r, &i) in order[..p].iter().enumerate() {
            t[(r, r)] = eig.eigenvalues[i];
            let s = tail * eig.eigenvectors[(m - 1, i)];
            t[(r, p)] = s;
            t[(p, r)] = s;
        }
        let s = one / tail;
        next.push(w.iter().map(|x| x.scale(s)).collect());
        basis = next;
        kept = p;
    }
    unreachable!("loop returns on the last restart")
}

fn combine<S: Scalar>(basis: &[Vec<S>], coeffs: impl Iterator<Item = S::Real>) -> Vec<S> {
    let mut out = vec![S::zero(); basis[0].len()];
    for (v, c) in basis.iter().zip(coeffs) {
        axpy(S::from_real(c), v, &mut out);
    }
    out
}

fn fresh_direction<S: Scalar>(basis: &[Vec<S>], rng: &mut ChaCha8Rng) -> Option<Vec<S>> {
    let n = basis[0].len();
    if basis.len() >= n {
        return None;
    }
    for _ in 0..4 {
        let mut v: Vec<S> =
            (0..n).map(|_| S::from_real(<S::Real as Real>::lit(rng.gen_range(-1.0..1.0)))).collect();
        for _ in 0..2 {
            for b in basis {
                let c = dot(b, &v);
                axpy(-c, b, &mut v);
            }
        }
        let nv = norm(&v);
        if nv > <S::Real as Real>::lit(1e-8) {
            let s = S::Real::one() / nv;
            return Some(v.into_iter().map(|x| x.scale(s)).collect());
        }
    }
    None
}
