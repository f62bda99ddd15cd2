//! Exact droplet bound states of the momentum-reduced kernel.
//!
//! For `n` magnons at quasi-momentum `θ ∈ (-π/n, π/n)` the product ansatz
//! `f(x) = ∏ ξ_k^{x_k}` with
//!
//! ```text
//! Θ   = 2 atan((1 + qⁿ)/(1 - qⁿ) · tan(nθ/2))
//! Ξ_m = (q^{m-½} e^{iΘ/2} + q^{-m+½} e^{-iΘ/2}) / (q^{m+½} e^{iΘ/2} + q^{-m-½} e^{-iΘ/2})
//! ξ_k = e^{-iθ} Ξ_{k-(n+1)/2}
//! ```
//!
//! satisfies the meeting condition `Ξ_m + Ξ_{m+1}⁻¹ = 2Δ`, has
//! `ξ_1 ⋯ ξ_n = 1`, and decays geometrically in every gap.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::operators::{Anisotropy, ReducedKernel};
use crate::scalar::{norm, norm_inf, Real};
use crate::sector_basis::GapDomain;

/// Bethe data for one `(q, n, θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheSolution<T> {
    pub q: T,
    pub n: usize,
    pub theta: T,
    /// Rapidity phase `Θ ∈ (-π, π)`.
    pub theta_cap: T,
    /// `ξ_1, …, ξ_n`.
    pub xi: Vec<Complex<T>>,
    /// Closed-form energy once computed.
    pub energy: Option<T>,
}

fn check_q<T: Real>(q: T) -> Result<()> {
    if q > T::zero() && q < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1)")))
    }
}

fn check_zone<T: Real>(n: usize, theta: T) -> Result<()> {
    let edge = T::PI() / T::from_count(n);
    if theta.is_finite() && theta.abs() < edge {
        Ok(())
    } else {
        Err(Error::ThetaOutOfZone { theta: theta.as_f64(), n })
    }
}

/// `Θ = 2 atan((1 + qⁿ)/(1 - qⁿ) · tan(nθ/2))`.
pub fn theta_cap<T: Real>(q: T, n: usize, theta: T) -> Result<T> {
    check_q(q)?;
    if n == 0 {
        return Err(Error::InvalidParameter("Θ needs n >= 1".into()));
    }
    check_zone(n, theta)?;
    let qn = q.powi(n as i32);
    let t = (T::one() + qn) / (T::one() - qn) * (T::from_count(n) * theta * T::lit(0.5)).tan();
    Ok(T::lit(2.0) * t.atan())
}

/// `Ξ_m` for half-integer (or integer) `m`.
pub fn xi_cap<T: Real>(q: T, m: T, big_theta: T) -> Complex<T> {
    let half = T::lit(0.5);
    let lq = q.ln();
    let p = |e: T| (e * lq).exp();
    let up = Complex::from_polar(T::one(), big_theta * half);
    let down = up.conj();
    let num = up * p(m - half) + down * p(half - m);
    let den = up * p(m + half) + down * p(-m - half);
    num / den
}

/// Solves for `ξ_1 … ξ_n`; the energy is left unset.
pub fn xi_factors<T: Real>(q: T, n: usize, theta: T) -> Result<BetheSolution<T>> {
    let big = theta_cap(q, n, theta)?;
    let phase = Complex::from_polar(T::one(), -theta);
    let shift = T::from_count(n + 1) * T::lit(0.5);
    let xi = (1..=n).map(|k| phase * xi_cap(q, T::from_count(k) - shift, big)).collect();
    Ok(BetheSolution { q, n, theta, theta_cap: big, xi, energy: None })
}

/// Full solution including the closed-form energy.
pub fn solve<T: Real>(q: T, n: usize, theta: T) -> Result<BetheSolution<T>> {
    let mut sol = xi_factors(q, n, theta)?;
    sol.energy = Some(bethe_energy(q, n, theta)?);
    Ok(sol)
}

impl<T: Real> BetheSolution<T> {
    /// `max_k |e^{iθ}ξ_k + e^{-iθ}ξ_{k+1}⁻¹ - 2Δ|`.
    pub fn meeting_residual(&self) -> T {
        let two_delta = self.q + self.q.recip();
        let e = Complex::from_polar(T::one(), self.theta);
        self.xi
            .windows(2)
            .map(|w| (e * w[0] + w[1].inv() / e - Complex::from(two_delta)).norm())
            .fold(T::zero(), T::max)
    }

    /// `|ξ_1 ⋯ ξ_n - 1|`.
    pub fn product_residual(&self) -> T {
        let p: Complex<T> = self.xi.iter().fold(Complex::one(), |a, b| a * b);
        (p - Complex::one()).norm()
    }

    /// Tail products `P_k = ξ_k ⋯ ξ_n` for `k = 2..=n`.
    pub fn tail_products(&self) -> Vec<Complex<T>> {
        let mut out = Vec::with_capacity(self.n.saturating_sub(1));
        let mut acc = Complex::one();
        for k in (1..self.n).rev() {
            acc = acc * self.xi[k];
            out.push(acc);
        }
        out.reverse();
        out
    }

    /// `|P_k|` for `k = 2..=n`.
    pub fn tail_ratios(&self) -> Vec<T> {
        self.tail_products().iter().map(|p| p.norm()).collect()
    }

    /// Largest decay ratio per unit gap (zero for `n = 1`).
    pub fn max_ratio(&self) -> T {
        self.tail_ratios().into_iter().fold(T::zero(), T::max)
    }

    pub fn is_normalizable(&self) -> bool {
        self.tail_ratios().iter().all(|&r| r < T::one())
    }

    /// Closed form of `Σ_gaps |f|²` over the untruncated domain, with the
    /// tightest droplet anchored at 1: `∏_k 1/(1 - |P_k|²)`.
    pub fn norm_sqr(&self) -> T {
        self.tail_ratios().iter().map(|&r| (T::one() - r * r).recip()).fold(T::one(), |a, b| a * b)
    }
}

/// Telescoped energy `Σ_m (1 - (Ξ_m + Ξ_m⁻¹)/(2Δ))` as a complex number.
pub fn telescoped_energy<T: Real>(q: T, n: usize, theta: T) -> Result<Complex<T>> {
    let big = theta_cap(q, n, theta)?;
    let two_delta = q + q.recip();
    let shift = T::from_count(n + 1) * T::lit(0.5);
    Ok((1..=n)
        .map(|k| {
            let x = xi_cap(q, T::from_count(k) - shift, big);
            Complex::from(T::one()) - (x + x.inv()) / two_delta
        })
        .fold(Complex::zero(), |a, b| a + b))
}

/// `(1 - q²)(1 - q^{2n}) / ((1 + q²)|1 + qⁿ e^{iΘ}|²)`.
pub fn closed_form_energy<T: Real>(q: T, n: usize, theta: T) -> Result<T> {
    if n == 0 {
        return Ok(T::zero());
    }
    let big = theta_cap(q, n, theta)?;
    let qn = q.powi(n as i32);
    let q2 = q * q;
    let d = (Complex::from(T::one()) + Complex::from_polar(qn, big)).norm_sqr();
    Ok((T::one() - q2) * (T::one() - qn * qn) / ((T::one() + q2) * d))
}

/// Bound-state energy; the closed form is returned after checking it
/// against the telescoped sum to [`Real::identity_tol`].
pub fn bethe_energy<T: Real>(q: T, n: usize, theta: T) -> Result<T> {
    if n == 0 {
        check_q(q)?;
        return Ok(T::zero());
    }
    let closed = closed_form_energy(q, n, theta)?;
    let summed = telescoped_energy(q, n, theta)?;
    let tol = T::identity_tol() * T::from_count(n).max(T::one());
    if (summed.re - closed).abs() > tol || summed.im.abs() > tol {
        return Err(Error::EnergyMismatch { closed: closed.as_f64(), summed: summed.re.as_f64() });
    }
    Ok(closed)
}

/// Zero-momentum droplet energy `(1 - q²)(1 - qⁿ)/((1 + q²)(1 + qⁿ))`.
pub fn droplet_limit<T: Real>(q: T, n: usize) -> T {
    let qn = q.powi(n as i32);
    let q2 = q * q;
    (T::one() - q2) * (T::one() - qn) / ((T::one() + q2) * (T::one() + qn))
}

/// The alternative "explicit" dispersion
/// `(1 - q²)/((1 + q²)(1 + qⁿ)) · (1 - qⁿ + 2(1 - cos θ)/(1 - qⁿ))`.
///
/// It agrees with [`bethe_energy`] at `θ = 0` only; kept for reporting.
pub fn remark_energy<T: Real>(q: T, n: usize, theta: T) -> T {
    let qn = q.powi(n as i32);
    let q2 = q * q;
    (T::one() - q2) / ((T::one() + q2) * (T::one() + qn))
        * (T::one() - qn + T::lit(2.0) * (T::one() - theta.cos()) / (T::one() - qn))
}

/// Bethe vector on a gap domain, `f(g) = ∏_{k≥2} P_k^{N_k - 1}`, so the
/// tightest droplet (all gaps 1) has value 1.
pub fn bethe_vector<T: Real>(sol: &BetheSolution<T>, domain: &GapDomain) -> Result<Vec<Complex<T>>> {
    if domain.count() != sol.n {
        return Err(Error::DimensionMismatch { expected: sol.n, got: domain.count() });
    }
    let tails = sol.tail_products();
    for (i, p) in tails.iter().enumerate() {
        if !(p.norm() < T::one()) {
            return Err(Error::NotNormalizable { k: i + 2, ratio: p.norm().as_f64() });
        }
    }
    let mut gaps = vec![0u32; sol.n - 1];
    Ok((0..domain.dim())
        .map(|i| {
            domain.gaps_into(i, &mut gaps);
            gaps.iter().zip(&tails).fold(Complex::one(), |acc, (&g, p)| acc * p.powi(g as i32 - 1))
        })
        .collect())
}

/// Residuals of a Bethe vector against a truncated reduced kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<T> {
    pub energy: T,
    /// `max |(K f - E f)(g)| / ‖f‖∞` over rows whose gaps are all `< n_max`.
    pub interior_residual: T,
    /// `‖K f - E f‖ / ‖f‖`.
    pub global_residual: T,
    /// Rayleigh quotient `⟨f, K f⟩ / ⟨f, f⟩` on the truncation.
    pub rayleigh: T,
    /// `max_k |P_k|`.
    pub ratio: T,
    /// `10 · ratio^{n_max} + 1e-12`, the bound expected for the global residual.
    pub envelope: T,
}

impl<T: Real> Certificate<T> {
    pub fn interior_ok(&self) -> bool {
        self.interior_residual <= T::lit(1e-10)
    }

    pub fn within_envelope(&self) -> bool {
        self.global_residual <= self.envelope
    }
}

/// Applies the kernel to the Bethe vector and measures how far it is from
/// an eigenvector.
pub fn certify_eigenpair<T: Real>(sol: &BetheSolution<T>, kernel: &ReducedKernel<T>) -> Result<Certificate<T>> {
    let same = kernel.n == sol.n
        && (kernel.q - sol.q).abs() <= T::epsilon() * T::lit(4.0)
        && (kernel.theta - sol.theta).abs() <= T::epsilon() * T::lit(4.0);
    if !same {
        return Err(Error::InvalidParameter(format!(
            "kernel (n={}, q={}, θ={}) does not match solution (n={}, q={}, θ={})",
            kernel.n, kernel.q, kernel.theta, sol.n, sol.q, sol.theta
        )));
    }
    let energy = match sol.energy {
        Some(e) => e,
        None => bethe_energy(sol.q, sol.n, sol.theta)?,
    };
    let f = bethe_vector(sol, &kernel.domain)?;
    let kf = kernel.matrix.matvec(&f)?;
    let r: Vec<Complex<T>> = kf.iter().zip(&f).map(|(a, x)| *a - x.scale(energy)).collect();

    let mut gaps = vec![0u32; sol.n - 1];
    let mut interior = T::zero();
    for (i, ri) in r.iter().enumerate() {
        kernel.domain.gaps_into(i, &mut gaps);
        if gaps.iter().all(|&g| g < kernel.n_max) {
            interior = interior.max(ri.norm());
        }
    }
    let fnorm = norm(&f);
    let rayleigh = crate::scalar::dot(&f, &kf).re / (fnorm * fnorm);
    let ratio = sol.max_ratio();
    Ok(Certificate {
        energy,
        interior_residual: interior / norm_inf(&f),
        global_residual: norm(&r) / fnorm,
        rayleigh,
        ratio,
        envelope: T::lit(10.0) * ratio.powi(kernel.n_max as i32) + T::lit(1e-12),
    })
}

/// Side-by-side values of the alternative dispersion formula and the
/// certified energy.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionDiscrepancy<T> {
    pub q: T,
    pub n: usize,
    pub theta: T,
    pub remark: T,
    pub certified: T,
    /// Rayleigh quotient of the Bethe vector on a truncated kernel.
    pub kernel: T,
    pub difference: T,
}

/// Evaluates [`remark_energy`] against the certified closed form and the
/// truncated kernel at `n_max`.
pub fn dispersion_discrepancy<T: Real>(q: T, n: usize, theta: T, n_max: u32) -> Result<DispersionDiscrepancy<T>> {
    let sol = solve(q, n, theta)?;
    let a = Anisotropy::new(q)?;
    let kernel = crate::operators::build_reduced_kernel(n, theta, &a, n_max)?;
    let cert = certify_eigenpair(&sol, &kernel)?;
    let certified = sol.energy.expect("solve sets the energy");
    let remark = remark_energy(q, n, theta);
    Ok(DispersionDiscrepancy { q, n, theta, remark, certified, kernel: cert.rayleigh, difference: remark - certified })
}
