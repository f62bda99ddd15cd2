//! Spectral radius by power iteration, and the Perron–Frobenius and
//! Wielandt domination checks built on it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operators::{SparseOperator, Symmetry};
use crate::scalar::{dot, norm, Real};

/// Settings of [`spectral_radius`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    pub max_iter: usize,
    /// Stop when `‖A x - ρ x‖ ≤ tol · ‖A‖_rowsum · ‖x‖`.
    pub tol: f64,
    /// Diagonal shift; `None` picks half the row-sum bound, which keeps
    /// `-ρ` away from the top of the shifted spectrum.
    pub shift: Option<f64>,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self { max_iter: 200_000, tol: 1e-12, shift: None }
    }
}

/// Power-iteration estimate of the spectral radius of a nonnegative matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRadius<T> {
    /// Rayleigh quotient of the final iterate.
    pub value: T,
    /// Collatz–Wielandt bounds `min (Ax)_i/x_i ≤ ρ ≤ max (Ax)_i/x_i`
    /// (`None` when the iterate has zero entries).
    pub bounds: Option<(T, T)>,
    pub residual: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Spectral radius of an entrywise-nonnegative square operator.
pub fn spectral_radius<T: Real>(op: &SparseOperator<T>, opts: PowerOptions) -> Result<SpectralRadius<T>> {
    if !op.is_nonnegative() {
        return Err(Error::InvalidParameter("spectral_radius needs a nonnegative operator".into()));
    }
    let n = op.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("empty operator".into()));
    }
    let bound = op.max_row_sum();
    let sigma = opts.shift.map(T::lit).unwrap_or(bound * T::lit(0.5));
    let tol = T::lit(opts.tol) * bound.max(T::min_positive_value());
    let mut x = vec![T::one() / T::from_count(n).sqrt(); n];
    let mut ax = vec![T::zero(); n];
    let mut rho = T::zero();
    let mut residual = T::infinity();
    let mut iterations = 0;
    while iterations < opts.max_iter {
        op.matvec_into(&x, &mut ax)?;
        iterations += 1;
        rho = dot(&x, &ax);
        residual = ax.iter().zip(&x).map(|(a, v)| (*a - rho * *v).powi(2)).sum::<T>().sqrt();
        if residual <= tol {
            break;
        }
        // x <- (A + σ) x / ‖·‖
        for (v, a) in x.iter_mut().zip(&ax) {
            *v = *a + sigma * *v;
        }
        let s = norm(&x);
        if s == T::zero() {
            break;
        }
        let s = T::one() / s;
        x.iter_mut().for_each(|v| *v = *v * s);
    }
    let bounds = if x.iter().all(|&v| v > T::zero()) {
        let ratios = ax.iter().zip(&x).map(|(a, v)| *a / *v);
        let (lo, hi) = ratios.fold((T::infinity(), T::neg_infinity()), |(lo, hi), r| (lo.min(r), hi.max(r)));
        Some((lo, hi))
    } else {
        None
    };
    Ok(SpectralRadius { value: rho, bounds, residual, iterations, converged: residual <= tol })
}

/// Tolerances of [`pf_check_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfOptions {
    /// Allowed `‖A f - λ f‖ / ‖f‖`.
    pub eig_tol: f64,
    /// Allowed `|ρ(A) - λ|`.
    pub rho_tol: f64,
    pub power: PowerOptions,
}

impl Default for PfOptions {
    fn default() -> Self {
        Self { eig_tol: 1e-10, rho_tol: 1e-8, power: PowerOptions::default() }
    }
}

/// Outcome of [`pf_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct PfReport<T> {
    pub nonnegative: bool,
    pub positive: bool,
    pub eigen_residual: T,
    pub spectral_radius: Option<T>,
    pub lambda: T,
    pub passed: bool,
    /// First hypothesis or conclusion that failed.
    pub failure: Option<String>,
}

/// Checks that a positive eigenvector `f` of a nonnegative operator has
/// eigenvalue `λ = ρ(A)`.
pub fn pf_check<T: Real>(op: &SparseOperator<T>, f: &[T], lambda: T) -> Result<PfReport<T>> {
    pf_check_with(op, f, lambda, PfOptions::default())
}

pub fn pf_check_with<T: Real>(op: &SparseOperator<T>, f: &[T], lambda: T, opts: PfOptions) -> Result<PfReport<T>> {
    let mut report = PfReport {
        nonnegative: op.is_nonnegative(),
        positive: f.iter().all(|&v| v > T::zero()),
        eigen_residual: T::nan(),
        spectral_radius: None,
        lambda,
        passed: false,
        failure: None,
    };
    if !report.nonnegative {
        report.failure = Some("nonnegativity violated: operator has a negative entry".into());
        return Ok(report);
    }
    if !report.positive {
        report.failure = Some("positivity violated: eigenvector has a non-positive entry".into());
        return Ok(report);
    }
    let af = op.matvec(f)?;
    let r: Vec<T> = af.iter().zip(f).map(|(a, x)| *a - lambda * *x).collect();
    report.eigen_residual = norm(&r) / norm(f);
    if !(report.eigen_residual <= T::lit(opts.eig_tol)) {
        report.failure = Some(format!(
            "eigenpair violated: residual {:e} > {:e}",
            report.eigen_residual.as_f64(),
            opts.eig_tol
        ));
        return Ok(report);
    }
    let rho = spectral_radius(op, opts.power)?;
    report.spectral_radius = Some(rho.value);
    if !rho.converged {
        report.failure = Some(format!("power iteration stalled at residual {:e}", rho.residual.as_f64()));
    } else if (rho.value - lambda).abs() > T::lit(opts.rho_tol) {
        report.failure = Some(format!(
            "spectral radius {:e} differs from eigenvalue {:e}",
            rho.value.as_f64(),
            lambda.as_f64()
        ));
    } else {
        report.passed = true;
    }
    Ok(report)
}

/// Outcome of [`wielandt_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct WielandtReport<T> {
    pub rho_k: T,
    pub rho_j: T,
    pub passed: bool,
}

/// `ρ(J) ≤ ρ(K) + 1e-10` for the restriction `J` of `K` to `subset`.
pub fn wielandt_check<T: Real>(k: &SparseOperator<T>, subset: &[usize]) -> Result<WielandtReport<T>> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.last().is_some_and(|&i| i >= k.dim()) {
        return Err(Error::InvalidParameter("subset index outside the kernel".into()));
    }
    let j = k.restrict(&s);
    wielandt_check_dominated(k, &s, &j)
}

/// As [`wielandt_check`] for any `J` on `subset` with `0 ≤ J ≤ K|subset`.
pub fn wielandt_check_dominated<T: Real>(
    k: &SparseOperator<T>,
    subset: &[usize],
    j: &SparseOperator<T>,
) -> Result<WielandtReport<T>> {
    if j.dim() != subset.len() {
        return Err(Error::DimensionMismatch { expected: subset.len(), got: j.dim() });
    }
    for (r, c, v) in j.triplets() {
        if v < T::zero() || v > k.get(subset[r], subset[c]) {
            return Err(Error::InvalidParameter(format!("J is not dominated by K at ({r}, {c})")));
        }
    }
    let rho_k = spectral_radius(k, PowerOptions::default())?.value;
    let rho_j = if j.dim() == 0 { T::zero() } else { spectral_radius(j, PowerOptions::default())?.value };
    Ok(WielandtReport { rho_k, rho_j, passed: rho_j <= rho_k + T::lit(1e-10) })
}

/// Symmetric sparse kernel with entries uniform in `[0, 1)` at the given
/// density, from a fixed seed.
pub fn random_nonnegative_kernel<T: Real>(dim: usize, density: f64, seed: u64) -> SparseOperator<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                let v = T::lit(rng.gen_range(0.0..1.0));
                t.push((i, j, v));
                if i != j {
                    t.push((j, i, v));
                }
            }
        }
    }
    let op = SparseOperator::from_triplets(dim, dim, Symmetry::Symmetric, &t);
    debug_assert!(op.hermiticity_defect() == T::zero());
    op
}
