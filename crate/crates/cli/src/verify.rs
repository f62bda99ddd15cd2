//! Invariant batteries behind `xxz verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use xxz_core::bethe::{bethe_vector, droplet_limit, solve};
use xxz_core::brackets::{build_hw_matrix, build_r, enumerate_brackets, hw_energy, su_q_generators, tl_operator, HwMethod};
use xxz_core::operators::{build_reduced_kernel, build_sector_hamiltonian, Anisotropy, BoundaryCondition};
use xxz_core::sector_basis::GapDomain;
use xxz_core::spectra::{dense_spectrum, pf_check, random_nonnegative_kernel, wielandt_check, wielandt_check_dominated};
use xxz_core::RealOperator;

use crate::args::Suite;
use crate::error::CliError;

/// Verdict of one check: `passed` iff `value <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(suite: &'static str, name: String, value: f64, tolerance: f64) -> Self {
        Self { suite, name, passed: value <= tolerance, value, tolerance, detail: None }
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

const QS: [f64; 3] = [0.3, 0.5, 0.9];
const IDENTITY_TOL: f64 = 1e-12;

fn max_abs(op: &RealOperator) -> f64 {
    op.triplets().fold(0.0, |m, t| m.max(t.2.abs()))
}

fn diff(a: &RealOperator, b: &RealOperator) -> Result<f64, CliError> {
    Ok(max_abs(&a.linear_combination(1.0, b, -1.0)?))
}

fn tl(max_len: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for q in QS {
        let a = Anisotropy::new(q)?;
        let loop_value = -a.q_two();
        for len in 2..=max_len {
            let (mut square, mut braid, mut far) = (0.0f64, 0.0f64, 0.0f64);
            for n in 0..=len / 2 {
                let basis = enumerate_brackets(len, n)?;
                let u = (1..len).map(|x| tl_operator(&basis, x, &a)).collect::<Result<Vec<_>, _>>()?;
                for x in 0..u.len() {
                    square = square.max(diff(&u[x].compose(&u[x])?, &u[x].shifted(0.0, loop_value))?);
                    if x + 1 < u.len() {
                        braid = braid.max(diff(&u[x].compose(&u[x + 1])?.compose(&u[x])?, &u[x])?);
                        braid = braid.max(diff(&u[x + 1].compose(&u[x])?.compose(&u[x + 1])?, &u[x + 1])?);
                    }
                    for y in x + 2..u.len() {
                        far = far.max(diff(&u[x].compose(&u[y])?, &u[y].compose(&u[x])?)?);
                    }
                }
            }
            out.push(Check::new("tl", format!("U_x^2 = -[2]_q U_x, q={q}, L={len}"), square, IDENTITY_TOL));
            out.push(Check::new("tl", format!("U_x U_x±1 U_x = U_x, q={q}, L={len}"), braid, IDENTITY_TOL));
            out.push(Check::new("tl", format!("distant U commute, q={q}, L={len}"), far, IDENTITY_TOL));
        }
    }
    Ok(out)
}

fn rmaps(max_len: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for q in QS {
        let a = Anisotropy::new(q)?;
        for len in 2..=max_len {
            let gens = su_q_generators(len, &a)?;
            let (mut kill, mut inter, mut cols) = (0.0f64, 0.0f64, 0.0f64);
            for n in 0..=len / 2 {
                let (_, r) = build_r(len, n, &a)?;
                if n > 0 {
                    // S⁺R cancels terms of size q^{-(L-1)}; measure against them
                    let s = gens.raise(n);
                    kill = kill.max(max_abs(&s.compose(&r)?) / (max_abs(s) * max_abs(&r)));
                }
                let h = build_sector_hamiltonian(len, n, BoundaryCondition::Kink, &a)?;
                let m = build_hw_matrix(len, n, &a)?;
                inter = inter.max(diff(&h.compose(&r)?, &r.compose(&m)?)?);
                let expected = (a.qpow(-0.5) + a.qpow(0.5)).powi(n as i32);
                let mut sums = vec![0.0f64; r.ncols()];
                for (_, j, v) in r.triplets() {
                    sums[j] += v.abs();
                }
                for s in sums {
                    cols = cols.max((s - expected).abs() / expected);
                }
            }
            out.push(Check::new("rmaps", format!("S+ R = 0, q={q}, L={len}"), kill, IDENTITY_TOL));
            out.push(Check::new("rmaps", format!("H R = R M, q={q}, L={len}"), inter, IDENTITY_TOL));
            out.push(Check::new("rmaps", format!("equal column norms of R, q={q}, L={len}"), cols, IDENTITY_TOL));
        }
    }
    Ok(out)
}

fn pf(n_max: u32) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for q in [0.3, 0.5] {
        let a = Anisotropy::new(q)?;
        for n in 1..=3 {
            let k = build_reduced_kernel(n, 0.0, &a, n_max)?;
            let shifted = k.matrix.as_real().expect("zero-momentum kernel is real").shifted(n as f64, -1.0);
            let sol = solve(q, n, 0.0)?;
            let f: Vec<f64> = bethe_vector(&sol, &k.domain)?.iter().map(|z| z.re).collect();
            let energy = sol.energy.expect("solve sets the energy");
            let r = pf_check(&shifted, &f, n as f64 - energy)?;
            let gap = r.spectral_radius.map_or(f64::INFINITY, |rho| (rho - r.lambda).abs());
            let name = format!("Bethe state is the Perron vector, q={q}, n={n}, nmax={n_max}");
            let mut c = Check::new("pf", name, gap, 1e-8);
            c.passed &= r.passed;
            out.push(c.detail(r.failure.unwrap_or_else(|| format!("eigen residual {:.1e}", r.eigen_residual))));
        }
    }
    Ok(out)
}

fn wielandt(seed: u64) -> Result<Vec<Check>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(usize, f64, u64, Vec<bool>)> = (0..100)
        .map(|_| {
            let dim = rng.gen_range(10..=500);
            let density = rng.gen_range(0.01..0.2);
            let kernel_seed = rng.gen();
            let keep = (0..dim).map(|_| rng.gen_bool(0.5)).collect();
            (dim, density, kernel_seed, keep)
        })
        .collect();
    let mut out = cases
        .par_iter()
        .enumerate()
        .map(|(i, (dim, density, kernel_seed, keep))| -> Result<Check, CliError> {
            let k = random_nonnegative_kernel::<f64>(*dim, *density, *kernel_seed);
            let subset: Vec<usize> = (0..*dim).filter(|&j| keep[j]).collect();
            let r = wielandt_check(&k, &subset)?;
            let name = format!("random restriction {}/100, dim={dim}, kept={}", i + 1, subset.len());
            Ok(Check::new("wielandt", name, r.rho_j - r.rho_k, 1e-10))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let a = Anisotropy::new(0.5)?;
    let n = 2;
    let big = build_reduced_kernel(n, 0.0, &a, 80)?;
    let big_k = big.matrix.as_real().expect("real kernel").shifted(n as f64, -1.0);
    let mut prev: Option<f64> = None;
    for m in [10u32, 20, 40, 80] {
        let small = build_reduced_kernel(n, 0.0, &a, m)?;
        let small_h = small.matrix.as_real().expect("real kernel");
        if m < 80 {
            let subset: Vec<usize> =
                GapDomain::new(n, m)?.iter().map(|g| big.domain.rank(g.gaps()).expect("nested domain")).collect();
            let r = wielandt_check_dominated(&big_k, &subset, &small_h.shifted(n as f64, -1.0))?;
            let name = format!("truncation nmax={m} inside nmax=80, q=0.5, n={n}");
            out.push(Check::new("wielandt", name, r.rho_j - r.rho_k, 1e-10));
        }
        let lowest = dense_spectrum(small_h)?.values[0];
        if let Some(p) = prev {
            out.push(
                Check::new("wielandt", format!("truncated infspec non-increasing at nmax={m}"), lowest - p, 1e-12)
                    .detail(format!("infspec {lowest:.12}")),
            );
        }
        prev = Some(lowest);
    }
    Ok(out)
}

fn mono(max_len: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for q in [0.3, 0.5, 0.8] {
        let a = Anisotropy::new(q)?;
        let mut prev_n: Option<Vec<f64>> = None;
        for n in 1..=3usize {
            if 2 * n > max_len {
                break;
            }
            let lens: Vec<usize> = (2 * n..=max_len).collect();
            let e = lens
                .par_iter()
                .map(|&len| hw_energy(len, n, &a, HwMethod::Gram).map(|e| e.value))
                .collect::<Result<Vec<_>, _>>()?;
            let rise = e.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
            let name = format!("E(L, {n}) non-increasing in L, q={q}, L={}..={max_len}", 2 * n);
            out.push(Check::new("mono", name, rise.max(0.0), 1e-12));
            let target = droplet_limit(q, n);
            let below = e.iter().map(|v| target - v).fold(f64::NEG_INFINITY, f64::max);
            out.push(
                Check::new("mono", format!("E(L, {n}) >= bound state energy, q={q}"), below.max(0.0), 1e-12)
                    .detail(format!("limit {target:.12}, E({max_len}) = {:.12}", e[e.len() - 1])),
            );
            if let Some(p) = &prev_n {
                // p starts at L = 2(n-1), e at L = 2n
                let worst = e.iter().zip(&p[2..]).map(|(hi, lo)| lo - hi).fold(f64::NEG_INFINITY, f64::max);
                let mut c = Check::new("mono", format!("E(L, {}) < E(L, {n}), q={q}", n - 1), worst, 0.0);
                c.passed = worst < 0.0;
                out.push(c);
            }
            prev_n = Some(e);
        }
    }
    Ok(out)
}

/// Runs a suite; `max_len` defaults to 10 for the algebraic suites and 12
/// for the monotonicity suite.
pub fn run_suite(suite: Suite, max_len: Option<usize>, n_max: u32, seed: u64) -> Result<Vec<Check>, CliError> {
    if max_len.is_some_and(|l| l < 2) {
        return Err(CliError::Usage("--max-L must be at least 2".into()));
    }
    if n_max < 2 {
        return Err(CliError::Usage("--nmax must be at least 2".into()));
    }
    Ok(match suite {
        Suite::Tl => tl(max_len.unwrap_or(10))?,
        Suite::Rmaps => rmaps(max_len.unwrap_or(10))?,
        Suite::Pf => pf(n_max)?,
        Suite::Wielandt => wielandt(seed)?,
        Suite::Mono => mono(max_len.unwrap_or(12))?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Tl, Suite::Rmaps, Suite::Pf, Suite::Wielandt, Suite::Mono] {
                all.extend(run_suite(s, max_len, n_max, seed)?);
            }
            all
        }
    })
}
