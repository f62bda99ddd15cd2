//! Scan records and their CSV/JSON renderings.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::CliError;

pub const CSV_HEADER: [&str; 10] = ["bc", "L", "n", "q", "delta", "theta_or_k", "energy", "method", "residual", "seconds"];

/// Quasi-momentum in radians or a ring momentum index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    Theta(f64),
    K(usize),
}

impl Coordinate {
    fn key(&self) -> f64 {
        match *self {
            Self::Theta(t) => t,
            Self::K(k) => k as f64,
        }
    }
}

/// One energy observation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub bc: String,
    #[serde(rename = "L")]
    pub len: usize,
    pub n: usize,
    pub q: f64,
    pub delta: Option<f64>,
    pub theta_or_k: Option<Coordinate>,
    pub energy: f64,
    pub method: String,
    pub residual: f64,
    /// Residual bound the record is checked against.
    pub tol: f64,
    pub flagged: bool,
    pub seconds: f64,
}

impl ScanRecord {
    /// Sets `tol` and flags the record when the residual exceeds it or the
    /// energy is not finite.
    pub fn checked(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.flagged = !self.energy.is_finite() || !(self.residual <= tol);
        self
    }
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0.0000000000000000e0".into();
    }
    format!("{x:.16e}")
}

/// Stable sort by `(bc, L, n, θ or k)`; ties keep emission order.
pub fn sort_records(records: &mut [ScanRecord]) {
    records.sort_by(|a, b| {
        a.bc.cmp(&b.bc).then(a.len.cmp(&b.len)).then(a.n.cmp(&b.n)).then_with(|| {
            let (x, y) = (a.theta_or_k.map(|c| c.key()), b.theta_or_k.map(|c| c.key()));
            x.partial_cmp(&y).unwrap_or(Ordering::Equal)
        })
    });
}

pub fn write_csv(records: &[ScanRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io { path: "<csv>".into(), source: e.into() };
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        let coord = match r.theta_or_k {
            Some(Coordinate::Theta(t)) => fmt17(t),
            Some(Coordinate::K(k)) => k.to_string(),
            None => String::new(),
        };
        w.write_record([
            r.bc.clone(),
            r.len.to_string(),
            r.n.to_string(),
            fmt17(r.q),
            r.delta.map(fmt17).unwrap_or_default(),
            coord,
            fmt17(r.energy),
            r.method.clone(),
            fmt17(r.residual),
            fmt17(r.seconds),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io { path: "<csv>".into(), source: e.into_error() })?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
