//! Maps between the bracket basis and the Ising basis.

use super::{enumerate_brackets, hw_matrix_on, Bracket, HighestWeightBasis};
use crate::error::{Error, Result};
use crate::operators::{build_sector_hamiltonian, Anisotropy, BoundaryCondition, SparseOperator, Symmetry};
use crate::scalar::{LinalgReal, Real};
use crate::sector_basis::{enumerate_sector, SectorBasis};
use crate::spectra::{dense_spectrum, generalized_lowest};

/// Ising-basis coefficients of `ψ(b) = ∏ (q^{-½} S⁻_x - q^{½} S⁻_y) |⇑⟩`,
/// as `(rank, value)` sorted by rank.
pub fn bracket_to_ising<T: Real>(b: &Bracket, sector: &SectorBasis, a: &Anisotropy<T>) -> Result<Vec<(usize, T)>> {
    if b.count() != sector.count() || b.arcs().last().is_some_and(|&(_, y)| y > sector.len()) {
        return Err(Error::InvalidBracket(format!(
            "bracket with {} arcs does not fit the sector (L = {}, n = {})",
            b.count(),
            sector.len(),
            sector.count()
        )));
    }
    let half = T::lit(0.5);
    let left = a.qpow(-half);
    let right = -a.qpow(half);
    let n = b.count();
    let mut out: Vec<(usize, T)> = (0..1u64 << n)
        .map(|choice| {
            let mut mask = 0u128;
            let mut c = T::one();
            for (i, &(x, y)) in b.arcs().iter().enumerate() {
                if choice >> i & 1 == 0 {
                    mask |= 1 << (x - 1);
                    c *= left;
                } else {
                    mask |= 1 << (y - 1);
                    c *= right;
                }
            }
            (sector.rank_mask(mask), c)
        })
        .collect();
    out.sort_by_key(|e| e.0);
    Ok(out)
}

/// Change of basis `R`: column `b` holds the Ising coefficients of `ψ(b)`.
pub fn build_r<T: Real>(len: usize, count: usize, a: &Anisotropy<T>) -> Result<(HighestWeightBasis, SparseOperator<T>)> {
    let basis = enumerate_brackets(len, count)?;
    let sector = enumerate_sector(len, count)?;
    let mut t = Vec::with_capacity(basis.dim() << count);
    for (col, b) in basis.brackets().iter().enumerate() {
        t.extend(bracket_to_ising(b, &sector, a)?.into_iter().map(|(row, v)| (row, col, v)));
    }
    let r = SparseOperator::from_triplets(sector.dim(), basis.dim(), Symmetry::General, &t);
    Ok((basis, r))
}

/// q-deformed total spin operators between the sectors of a chain.
#[derive(Debug, Clone)]
pub struct SuQGenerators<T> {
    pub len: usize,
    /// `lowering[n]`: `H(n) → H(n+1)`, `S⁻ = Σ_x S⁻_x q^{2(S³_{x+1} + … + S³_L)}`.
    pub lowering: Vec<SparseOperator<T>>,
    /// `raising[n-1]`: `H(n) → H(n-1)`, `S⁺ = Σ_x q^{-2(S³_1 + … + S³_{x-1})} S⁺_x`.
    pub raising: Vec<SparseOperator<T>>,
}

impl<T: Real> SuQGenerators<T> {
    pub fn lower(&self, n: usize) -> &SparseOperator<T> {
        &self.lowering[n]
    }

    pub fn raise(&self, n: usize) -> &SparseOperator<T> {
        &self.raising[n - 1]
    }

    /// Eigenvalue of `S³` on `H(n)`.
    pub fn s3(&self, n: usize) -> T {
        T::from_count(self.len) * T::lit(0.5) - T::from_count(n)
    }
}

pub fn su_q_generators<T: Real>(len: usize, a: &Anisotropy<T>) -> Result<SuQGenerators<T>> {
    let sectors: Vec<SectorBasis> = (0..=len).map(|n| enumerate_sector(len, n)).collect::<Result<_>>()?;
    // q^{#up - #down} over the sites selected by `range`
    let tilt = |mask: u128, sites: std::ops::Range<usize>| {
        let span = sites.len() as i64;
        let sel = if span == 0 { 0 } else { (mask >> sites.start) & ((1u128 << span) - 1) };
        let down = sel.count_ones() as i64;
        span - 2 * down
    };
    let q = a.q();
    let mut lowering = Vec::with_capacity(len);
    let mut raising = Vec::with_capacity(len);
    for n in 0..len {
        let (src, dst) = (&sectors[n], &sectors[n + 1]);
        lowering.push(SparseOperator::from_row_fn(dst.dim(), src.dim(), Symmetry::General, |i, out| {
            let m = dst.mask(i);
            for x in 0..len {
                if m >> x & 1 == 1 {
                    let before = m & !(1 << x);
                    out.push((src.rank_mask(before), q.powi(tilt(before, x + 1..len) as i32)));
                }
            }
        }));
    }
    for n in 1..=len {
        let (src, dst) = (&sectors[n], &sectors[n - 1]);
        raising.push(SparseOperator::from_row_fn(dst.dim(), src.dim(), Symmetry::General, |i, out| {
            let m = dst.mask(i);
            for x in 0..len {
                if m >> x & 1 == 0 {
                    let before = m | (1 << x);
                    out.push((src.rank_mask(before), q.powi(-tilt(before, 0..x) as i32)));
                }
            }
        }));
    }
    Ok(SuQGenerators { len, lowering, raising })
}

/// Route used for `E(L, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwMethod {
    /// Pencil `(Rᵀ H^k R, Rᵀ R)`.
    Gram,
    /// Dense eigenvalues of the non-symmetric bracket-basis matrix.
    Direct,
}

impl HwMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Gram => "gram",
            Self::Direct => "direct",
        }
    }
}

/// Lowest kink energy on the highest-weight space.
#[derive(Debug, Clone, PartialEq)]
pub struct HwEnergy<T> {
    pub value: T,
    pub residual: T,
    pub method: HwMethod,
    pub warnings: Vec<String>,
}

/// `E(L, n) = infspec H^k` on `H^hw(n)`.
pub fn hw_energy<T: LinalgReal>(len: usize, count: usize, a: &Anisotropy<T>, method: HwMethod) -> Result<HwEnergy<T>> {
    match method {
        HwMethod::Direct => {
            let basis = enumerate_brackets(len, count)?;
            let m = hw_matrix_on(&basis, a)?;
            let r = dense_spectrum(&m)?;
            Ok(HwEnergy { value: r.values[0], residual: T::zero(), method, warnings: r.warnings })
        }
        HwMethod::Gram => {
            let (_, r) = build_r(len, count, a)?;
            let h = build_sector_hamiltonian(len, count, BoundaryCondition::Kink, a)?;
            let rt = r.adjoint();
            let g = rt.compose(&r)?;
            let ah = rt.compose(&h.compose(&r)?)?;
            let sym = ah.linear_combination(T::lit(0.5), &ah.adjoint(), T::lit(0.5))?.with_symmetry(Symmetry::Symmetric);
            let e = generalized_lowest(&sym, &g.with_symmetry(Symmetry::Symmetric))?;
            Ok(HwEnergy { value: e.values[0], residual: e.residuals[0], method, warnings: e.warnings })
        }
    }
}
