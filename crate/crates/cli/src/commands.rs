//! Scan drivers.

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use xxz_core::bethe::{certify_eigenpair, closed_form_energy, droplet_limit, solve};
use xxz_core::brackets::{hw_energy, HwMethod};
use xxz_core::operators::{
    build_momentum_block, build_reduced_kernel, build_sector_hamiltonian, Anisotropy, BoundaryCondition, SparseOperator,
};
use xxz_core::spectra::{dense_spectrum, fit_limit, lanczos_lowest, FitModel};
use xxz_core::{Anisotropy64, BoundaryCondition64, LinalgReal, Scalar};

use crate::args::{BcArg, DispersionArgs, FitArg, HwArgs, HwMethodArg, ScanArgs, SectorArgs};
use crate::error::{usage, CliError};
use crate::record::{Coordinate, ScanRecord};

/// Sectors up to this size are diagonalized densely.
pub const DENSE_LIMIT: usize = 2000;

/// Records plus command-specific extras.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub command: String,
    pub records: Vec<ScanRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<crate::verify::Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    pub warnings: Vec<String>,
}

impl Report {
    fn new(command: &str) -> Self {
        Self { command: command.into(), ..Default::default() }
    }
}

pub(crate) fn anisotropy(q: f64) -> Result<Anisotropy64, CliError> {
    if !(q > 0.0 && q <= 1.0) {
        return usage(format!("--q {q} must lie in (0, 1]"));
    }
    Ok(Anisotropy::new(q)?)
}

fn boundary(bc: BcArg, delta: Option<f64>, warnings: &mut Vec<String>) -> Result<BoundaryCondition64, CliError> {
    if delta.is_some() && bc != BcArg::Droplet {
        return usage("--delta only applies to --bc droplet");
    }
    let bc = match bc {
        BcArg::Open => BoundaryCondition::Open,
        BcArg::Kink => BoundaryCondition::Kink,
        BcArg::Droplet => BoundaryCondition::Droplet { delta: delta.unwrap_or(1.0) },
        BcArg::Cyclic => BoundaryCondition::Cyclic,
    };
    bc.validate()?;
    warnings.extend(bc.warnings());
    Ok(bc)
}

fn delta_of(bc: &BoundaryCondition64) -> Option<f64> {
    match *bc {
        BoundaryCondition::Droplet { delta } => Some(delta),
        _ => None,
    }
}

/// Lowest eigenvalues with residuals and the bound each residual is held to.
struct Lowest {
    values: Vec<f64>,
    residuals: Vec<f64>,
    method: &'static str,
    bound: f64,
}

fn lowest_k<S>(op: &SparseOperator<S>, k: usize, tol: f64) -> Result<Lowest, CliError>
where
    S: Scalar<Real = f64>,
    f64: LinalgReal,
{
    let k = k.min(op.dim());
    let scale = op.max_row_sum().max(1.0);
    if op.dim() <= DENSE_LIMIT {
        let r = dense_spectrum(op)?;
        Ok(Lowest {
            values: r.values[..k].to_vec(),
            residuals: r.residuals[..k].to_vec(),
            method: r.method.tag(),
            bound: r.tol.max(tol * scale),
        })
    } else {
        let r = lanczos_lowest(op, k, tol)?;
        Ok(Lowest { values: r.values, residuals: r.residuals, method: r.method.tag(), bound: r.tol * scale })
    }
}

pub fn sector_spectrum(a: &SectorArgs, tol: f64) -> Result<Report, CliError> {
    let mut report = Report::new("sector-spectrum");
    let an = anisotropy(a.q)?;
    let bc = boundary(a.bc, a.delta, &mut report.warnings)?;
    if a.len == 0 || a.n > a.len {
        return usage(format!("--n {} must lie in 0..=L with L = {} >= 1", a.n, a.len));
    }
    if a.k == Some(0) {
        return usage("--k must be at least 1");
    }
    if let Some(m) = a.momentum {
        if a.bc != BcArg::Cyclic {
            return usage("--momentum requires --bc cyclic");
        }
        if m >= a.len {
            return usage(format!("--momentum {m} must lie in 0..L = {}", a.len));
        }
    }
    let want = a.k.unwrap_or(2);
    let start = Instant::now();
    let low = match a.momentum {
        Some(m) => {
            let block = build_momentum_block(a.len, a.n, m, &an)?;
            if block.dim() == 0 {
                report.warnings.push(format!("momentum block k = {m} of sector (L = {}, n = {}) is empty", a.len, a.n));
                return Ok(report);
            }
            lowest_k(&block, want, tol)?
        }
        None => lowest_k(&build_sector_hamiltonian(a.len, a.n, bc, &an)?, want, tol)?,
    };
    if a.k.is_some_and(|k| k > low.values.len()) {
        report.warnings.push(format!("only {} eigenvalues exist; --k {} capped", low.values.len(), want));
    }
    let seconds = start.elapsed().as_secs_f64();
    report.records = low
        .values
        .iter()
        .zip(&low.residuals)
        .map(|(&energy, &residual)| {
            ScanRecord {
                bc: bc.tag().into(),
                len: a.len,
                n: a.n,
                q: a.q,
                delta: delta_of(&bc),
                theta_or_k: a.momentum.map(Coordinate::K),
                energy,
                method: low.method.into(),
                residual,
                tol: 0.0,
                flagged: false,
                seconds,
            }
            .checked(low.bound)
        })
        .collect();
    Ok(report)
}

fn hw_record(len: usize, n: usize, q: f64, method: HwMethod, an: &Anisotropy64, tol: f64) -> Result<(ScanRecord, Vec<String>), CliError> {
    let start = Instant::now();
    let e = hw_energy(len, n, an, method)?;
    let rec = ScanRecord {
        bc: "kink".into(),
        len,
        n,
        q,
        delta: None,
        theta_or_k: None,
        energy: e.value,
        method: format!("hw-{}", method.tag()),
        residual: e.residual,
        tol: 0.0,
        flagged: false,
        seconds: start.elapsed().as_secs_f64(),
    };
    // the pencil residual carries the Gram scale, so the bound is relative to max(1, |E|)
    Ok((rec.checked(tol * e.value.abs().max(1.0)), e.warnings))
}

fn check_hw_sector(len: usize, n: usize) -> Result<(), CliError> {
    if len == 0 || 2 * n > len {
        return usage(format!("highest-weight space needs 2n <= L, got L = {len}, n = {n}"));
    }
    Ok(())
}

pub fn hw_spectrum(a: &HwArgs, tol: f64) -> Result<Report, CliError> {
    let mut report = Report::new("hw-spectrum");
    let an = anisotropy(a.q)?;
    check_hw_sector(a.len, a.n)?;
    let methods: &[HwMethod] = match a.method {
        HwMethodArg::Gram => &[HwMethod::Gram],
        HwMethodArg::Direct => &[HwMethod::Direct],
        HwMethodArg::Both => &[HwMethod::Gram, HwMethod::Direct],
    };
    for &m in methods {
        let (rec, w) = hw_record(a.len, a.n, a.q, m, &an, tol)?;
        report.warnings.extend(w);
        report.records.push(rec);
    }
    if let [g, d] = &mut report.records[..] {
        let diff = (g.energy - d.energy).abs();
        let agree = diff <= tol * g.energy.abs().max(1.0);
        if !agree {
            report.warnings.push(format!("gram and direct routes differ by {diff:e}"));
            g.flagged = true;
            d.flagged = true;
        }
        report.summary = Some(json!({ "difference": diff, "agree": agree }));
    }
    Ok(report)
}

/// Interior grid `θ_j = -π/n + (j + 1)·2π/(n(steps + 1))`.
pub fn theta_grid(n: usize, steps: usize) -> Vec<f64> {
    let width = 2.0 * PI / n as f64;
    (0..steps).map(|j| -PI / n as f64 + (j + 1) as f64 * width / (steps + 1) as f64).collect()
}

pub fn dispersion(a: &DispersionArgs, tol: f64) -> Result<Report, CliError> {
    let mut report = Report::new("dispersion");
    if !(a.q > 0.0 && a.q < 1.0) {
        return usage(format!("--q {} must lie in (0, 1) for bound states", a.q));
    }
    let an = anisotropy(a.q)?;
    if a.n == 0 {
        return usage("--n must be at least 1");
    }
    if a.theta_steps == 0 {
        return usage("--theta-steps must be at least 1");
    }
    if a.nmax < 2 {
        return usage("--nmax must be at least 2");
    }
    let dim = (a.nmax as u128).checked_pow(a.n as u32 - 1).unwrap_or(u128::MAX);
    if dim > 5_000_000 {
        return Err(CliError::Guard(xxz_core::Error::DimensionGuard { dim: usize::try_from(dim).unwrap_or(usize::MAX), limit: 5_000_000 }));
    }
    let want = if a.gap { 2 } else { 1 };
    let rows = theta_grid(a.n, a.theta_steps)
        .into_par_iter()
        .map(|theta| -> Result<Vec<ScanRecord>, CliError> {
            let start = Instant::now();
            let sol = solve(a.q, a.n, theta)?;
            let kernel = build_reduced_kernel(a.n, theta, &an, a.nmax)?;
            let cert = certify_eigenpair(&sol, &kernel)?;
            let closed = closed_form_energy(a.q, a.n, theta)?;
            let bethe_seconds = start.elapsed().as_secs_f64();
            let start = Instant::now();
            let low = lowest_k(&kernel.matrix.to_complex(), want, tol)?;
            let seconds = start.elapsed().as_secs_f64();
            let rec = |energy, method: &str, residual, seconds| ScanRecord {
                bc: "infinite".into(),
                len: a.nmax as usize,
                n: a.n,
                q: a.q,
                delta: None,
                theta_or_k: Some(Coordinate::Theta(theta)),
                energy,
                method: method.into(),
                residual,
                tol: 0.0,
                flagged: false,
                seconds,
            };
            let mut out = vec![rec(closed, "bethe", cert.global_residual, bethe_seconds).checked(cert.envelope.max(tol))];
            let names = ["kernel", "kernel-second"];
            for (i, (&e, &r)) in low.values.iter().zip(&low.residuals).enumerate() {
                out.push(rec(e, names[i], r, seconds).checked(low.bound));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut worst = 0.0f64;
    let mut min_gap = f64::INFINITY;
    for row in &rows {
        worst = worst.max((row[0].energy - row[1].energy).abs());
        if let Some(second) = row.get(2) {
            min_gap = min_gap.min(second.energy - row[1].energy);
        }
    }
    let mut summary = json!({ "max_closed_minus_kernel": worst, "zero_momentum_limit": droplet_limit(a.q, a.n) });
    if a.gap {
        summary["min_gap"] = json!(min_gap);
    }
    report.summary = Some(summary);
    report.records = rows.into_iter().flatten().collect();
    Ok(report)
}

pub fn scan_convergence(a: &ScanArgs, tol: f64) -> Result<Report, CliError> {
    let mut report = Report::new("scan-convergence");
    let an = anisotropy(a.q)?;
    let bc = boundary(a.bc, a.delta, &mut report.warnings)?;
    if a.len_min > a.len_max || a.len_min == 0 {
        return usage(format!("need 1 <= --L-min <= --L-max, got {}..{}", a.len_min, a.len_max));
    }
    if a.bc == BcArg::Kink {
        check_hw_sector(a.len_min, a.n)?;
    } else if a.n > a.len_min {
        return usage(format!("--n {} exceeds --L-min {}", a.n, a.len_min));
    }
    let lens: Vec<usize> = (a.len_min..=a.len_max).collect();
    report.records = lens
        .par_iter()
        .map(|&len| -> Result<ScanRecord, CliError> {
            if a.bc == BcArg::Kink {
                return hw_record(len, a.n, a.q, HwMethod::Gram, &an, tol).map(|r| r.0);
            }
            let start = Instant::now();
            let low = lowest_k(&build_sector_hamiltonian(len, a.n, bc, &an)?, 1, tol)?;
            Ok(ScanRecord {
                bc: bc.tag().into(),
                len,
                n: a.n,
                q: a.q,
                delta: delta_of(&bc),
                theta_or_k: None,
                energy: low.values[0],
                method: low.method.into(),
                residual: low.residuals[0],
                tol: 0.0,
                flagged: false,
                seconds: start.elapsed().as_secs_f64(),
            }
            .checked(low.bound))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let energies: Vec<f64> = report.records.iter().map(|r| r.energy).collect();
    let target = droplet_limit(a.q, a.n);
    let strictly_decreasing = energies.windows(2).all(|w| w[1] < w[0]);
    let above_target = energies.iter().all(|&e| e >= target - 1e-12);
    let mut summary = json!({
        "target": target,
        "strictly_decreasing": strictly_decreasing,
        "above_target": above_target,
    });
    if energies.len() >= 3 {
        let model = match a.fit {
            FitArg::Geometric => FitModel::Geometric,
            FitArg::InversePower => FitModel::InversePower,
        };
        let points: Vec<(f64, f64)> = lens.iter().map(|&l| l as f64).zip(energies.iter().copied()).collect();
        let fit = fit_limit(&points, model)?;
        if fit.flagged() {
            report.warnings.push(format!("fit flagged: monotone = {}, {}", fit.monotone, fit.note.clone().unwrap_or_default()));
        }
        summary["fit"] = json!({
            "model": fit.model.tag(),
            "limit": fit.limit.map(|l| l + 0.0),
            "residual": fit.residual,
            "monotone": fit.monotone,
            "clamped": fit.clamped,
            "note": fit.note,
        });
    } else {
        report.warnings.push("fewer than three lengths; no fit".into());
    }
    report.summary = Some(summary);
    Ok(report)
}
