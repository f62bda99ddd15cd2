//! Limits of monotone energy sequences.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Model fitted through the last three points of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `e(x) = e∞ + c rˣ` (three-point Aitken estimate; needs equal spacing).
    Geometric,
    /// `e(x) = e∞ + a/x² + b/x³`, for algebraic convergence.
    InversePower,
}

impl FitModel {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Geometric => "geometric",
            Self::InversePower => "inverse-power",
        }
    }
}

/// Result of [`fit_limit`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationFit<T> {
    /// `(x, e(x))`, x being L or n_max.
    pub points: Vec<(T, T)>,
    /// `None` when the fit was skipped.
    pub limit: Option<T>,
    pub model: FitModel,
    /// Spread between the estimates from the last and the previous triple
    /// (zero with exactly three points).
    pub residual: T,
    pub monotone: bool,
    /// The raw estimate lay above `min e` and was clamped to it.
    pub clamped: bool,
    pub note: Option<String>,
}

impl<T: Real> ExtrapolationFit<T> {
    pub fn flagged(&self) -> bool {
        !self.monotone || self.limit.is_none()
    }
}

/// Fits a limit to a non-increasing sequence. Non-monotone input is
/// flagged and the fit skipped; the estimate never exceeds `min e`.
pub fn fit_limit<T: Real>(points: &[(T, T)], model: FitModel) -> Result<ExtrapolationFit<T>> {
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!("fit_limit needs >= 3 points, got {}", points.len())));
    }
    let slack = T::epsilon() * T::lit(64.0);
    let monotone = points.windows(2).all(|w| w[1].1 <= w[0].1 + slack * w[0].1.abs().max(T::one()));
    let mut fit = ExtrapolationFit {
        points: points.to_vec(),
        limit: None,
        model,
        residual: T::zero(),
        monotone,
        clamped: false,
        note: None,
    };
    if !monotone {
        fit.note = Some("sequence is not non-increasing; fit skipped".into());
        return Ok(fit);
    }
    let n = points.len();
    let last = estimate(&points[n - 3..], model)?;
    let Some(last) = last else {
        fit.note = Some("tail does not converge under this model".into());
        return Ok(fit);
    };
    if n >= 4 {
        if let Some(prev) = estimate(&points[n - 4..n - 1], model)? {
            fit.residual = (last - prev).abs();
        }
    }
    let min = points.iter().map(|p| p.1).fold(T::infinity(), T::min);
    if last > min {
        fit.clamped = true;
        fit.limit = Some(min);
    } else {
        fit.limit = Some(last);
    }
    Ok(fit)
}

fn estimate<T: Real>(p: &[(T, T)], model: FitModel) -> Result<Option<T>> {
    let [(x1, e1), (x2, e2), (x3, e3)] = [p[0], p[1], p[2]];
    match model {
        FitModel::Geometric => {
            let h1 = x2 - x1;
            let h2 = x3 - x2;
            if (h1 - h2).abs() > T::lit(1e-9) * h1.abs().max(T::one()) {
                return Err(Error::InvalidParameter("geometric fit needs equally spaced points".into()));
            }
            let d1 = e2 - e1;
            let d2 = e3 - e2;
            if d2 == T::zero() {
                return Ok(Some(e3));
            }
            let r = d2 / d1;
            if !(r >= T::zero() && r < T::one()) {
                return Ok(None);
            }
            Ok(Some(e3 + d2 * d2 / (d1 - d2)))
        }
        FitModel::InversePower => {
            // solve e_i = e∞ + a x_i⁻² + b x_i⁻³ by Cramer's rule
            let row = |x: T| [T::one(), (x * x).recip(), (x * x * x).recip()];
            let m = [row(x1), row(x2), row(x3)];
            let e = [e1, e2, e3];
            let det3 = |m: [[T; 3]; 3]| {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            };
            let d = det3(m);
            if d == T::zero() {
                return Err(Error::InvalidParameter("inverse-power fit needs distinct points".into()));
            }
            let mut m0 = m;
            for i in 0..3 {
                m0[i][0] = e[i];
            }
            Ok(Some(det3(m0) / d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> Vec<(f64, f64)> {
        v.iter().enumerate().map(|(i, &e)| (i as f64, e)).collect()
    }

    #[test]
    fn exact_geometric_input() {
        // 1/6 + (1/3)·0.4^i
        let f = fit_limit(&seq(&[0.5, 0.3, 0.22, 0.188]), FitModel::Geometric).unwrap();
        assert!((f.limit.unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
        assert!(!f.flagged());
    }

    #[test]
    fn constant_sequence() {
        for model in [FitModel::Geometric, FitModel::InversePower] {
            let f = fit_limit(&[(4.0, 0.3), (6.0, 0.3), (8.0, 0.3)], model).unwrap();
            assert_eq!(f.limit, Some(0.3));
        }
    }

    #[test]
    fn non_monotone_is_flagged() {
        let f = fit_limit(&seq(&[0.3, 0.4, 0.2]), FitModel::Geometric).unwrap();
        assert!(f.flagged());
        assert!(f.limit.is_none());
    }

    #[test]
    fn inverse_power_recovers_model() {
        let pts: Vec<(f64, f64)> =
            [6.0, 8.0, 10.0, 12.0].iter().map(|&x: &f64| (x, 0.25 + 0.7 / (x * x) - 0.3 / x.powi(3))).collect();
        let f = fit_limit(&pts, FitModel::InversePower).unwrap();
        assert!((f.limit.unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn estimate_is_clamped_to_the_minimum() {
        // a tail that flattens abruptly makes the algebraic model overshoot
        let f = fit_limit(&[(4.0, 1.0), (6.0, 0.5), (8.0, 0.45)], FitModel::InversePower).unwrap();
        assert!(f.clamped);
        assert_eq!(f.limit, Some(0.45));
    }

    #[test]
    fn single_magnon_kink_sequence() {
        // E(L, 1) = 1 - cos(π/L)/Δ at q = 0.5
        let pts: Vec<(f64, f64)> =
            (4..=20).map(|l| (l as f64, 1.0 - (std::f64::consts::PI / l as f64).cos() / 1.25)).collect();
        let f = fit_limit(&pts, FitModel::Geometric).unwrap();
        assert!((f.limit.unwrap() - 0.2).abs() < 5e-3);
    }

    #[test]
    fn too_few_points() {
        assert!(fit_limit(&seq(&[1.0, 0.5]), FitModel::Geometric).is_err());
    }
}
