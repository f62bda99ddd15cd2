//! Magnetization sectors, gap coordinates and translation orbits.
//!
//! A configuration of `n` down spins on `[1, L]` is stored as a bit mask
//! (bit `x - 1` set when site `x` is down). Sectors are listed in
//! lexicographic order of the sorted position tuple and ranked with the
//! combinatorial number system.

use crate::error::{guard_dim, Error, Result};

/// Widest chain a bit-mask configuration can hold.
pub const MAX_SITES: usize = 128;

/// Saturating binomial coefficient.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Strictly increasing tuple of down-spin positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfig {
    positions: Vec<i64>,
}

impl SpinConfig {
    pub fn new(positions: Vec<i64>) -> Result<Self> {
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "positions {positions:?} are not strictly increasing"
            )));
        }
        Ok(Self { positions })
    }

    pub fn empty() -> Self {
        Self { positions: Vec::new() }
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Checks that every position lies in `[lo, hi]`.
    pub fn within(&self, lo: i64, hi: i64) -> bool {
        self.positions.iter().all(|&x| lo <= x && x <= hi)
    }

    /// Bit mask on `[1, len]`; `None` when a position falls outside.
    pub fn to_mask(&self, len: usize) -> Option<u128> {
        let mut mask = 0u128;
        for &x in &self.positions {
            if x < 1 || x as usize > len || len > MAX_SITES {
                return None;
            }
            mask |= 1u128 << (x - 1);
        }
        Some(mask)
    }

    pub fn from_mask(mask: u128) -> Self {
        let mut positions = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let b = m.trailing_zeros() as i64;
            positions.push(b + 1);
            m &= m - 1;
        }
        Self { positions }
    }
}

/// All configurations of `count` down spins on `[1, len]`.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    len: usize,
    count: usize,
    masks: Vec<u128>,
    // binom[m][k] for m <= len, k <= count + 1
    binom: Vec<Vec<u64>>,
}

/// Lists the `(L, n)` sector lexicographically.
pub fn enumerate_sector(len: usize, count: usize) -> Result<SectorBasis> {
    if len == 0 {
        return Err(Error::InvalidSector { len, count, reason: "L must be at least 1" });
    }
    if count > len {
        return Err(Error::InvalidSector { len, count, reason: "n exceeds L" });
    }
    if len > MAX_SITES {
        return Err(Error::InvalidSector { len, count, reason: "chain longer than 128 sites" });
    }
    let dim = binomial(len, count);
    guard_dim(usize::try_from(dim).unwrap_or(usize::MAX))?;
    let dim = dim as usize;

    let binom = (0..=len)
        .map(|m| (0..=count + 1).map(|k| binomial(m, k).min(u64::MAX as u128) as u64).collect())
        .collect();

    let mut masks = Vec::with_capacity(dim);
    // positions are 0-based here
    let mut c: Vec<usize> = (0..count).collect();
    loop {
        masks.push(c.iter().fold(0u128, |m, &p| m | (1u128 << p)));
        // advance to the next combination in lexicographic order
        let mut i = count;
        loop {
            if i == 0 {
                return Ok(SectorBasis { len, count, masks, binom });
            }
            i -= 1;
            if c[i] < len - count + i {
                break;
            }
        }
        c[i] += 1;
        for j in i + 1..count {
            c[j] = c[j - 1] + 1;
        }
    }
}

impl SectorBasis {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn dim(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[u128] {
        &self.masks
    }

    pub fn mask(&self, index: usize) -> u128 {
        self.masks[index]
    }

    pub fn config(&self, index: usize) -> SpinConfig {
        SpinConfig::from_mask(self.masks[index])
    }

    pub fn configs(&self) -> impl Iterator<Item = SpinConfig> + '_ {
        self.masks.iter().map(|&m| SpinConfig::from_mask(m))
    }

    /// Rank of a mask known to lie in the sector; O(n).
    pub fn rank_mask(&self, mask: u128) -> usize {
        debug_assert_eq!(mask.count_ones() as usize, self.count);
        let total = self.masks.len() as u64;
        let mut sub = 0u64;
        let mut m = mask;
        let mut i = 1usize;
        while m != 0 {
            let a = m.trailing_zeros() as usize;
            sub += self.binom[self.len - 1 - a][self.count - i + 1];
            m &= m - 1;
            i += 1;
        }
        (total - 1 - sub) as usize
    }

    /// Rank of a configuration, validating membership.
    pub fn rank_config(&self, config: &SpinConfig) -> Result<usize> {
        if config.len() != self.count {
            return Err(Error::ConfigOutsideSector(config.positions().to_vec()));
        }
        let mask = config
            .to_mask(self.len)
            .ok_or_else(|| Error::ConfigOutsideSector(config.positions().to_vec()))?;
        Ok(self.rank_mask(mask))
    }
}

/// Nearest-neighbour distances `(N_2, …, N_n)` of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapVector {
    gaps: Vec<u32>,
}

impl GapVector {
    pub fn new(gaps: Vec<u32>) -> Result<Self> {
        if gaps.iter().any(|&g| g == 0) {
            return Err(Error::InvalidParameter(format!("gaps {gaps:?} must all be >= 1")));
        }
        Ok(Self { gaps })
    }

    pub fn gaps(&self) -> &[u32] {
        &self.gaps
    }

    /// Representative with `x_1 = 0`.
    pub fn to_config(&self) -> SpinConfig {
        let mut positions = Vec::with_capacity(self.gaps.len() + 1);
        let mut x = 0i64;
        positions.push(x);
        for &g in &self.gaps {
            x += g as i64;
            positions.push(x);
        }
        SpinConfig { positions }
    }

    /// Translation class of a configuration.
    pub fn from_config(config: &SpinConfig) -> Self {
        let gaps = config.positions().windows(2).map(|w| (w[1] - w[0]) as u32).collect();
        Self { gaps }
    }
}

/// Truncated gap domain `{1..=n_max}^(n-1)` in lexicographic order.
///
/// The index of a gap vector is its mixed-radix value with `N_2` the most
/// significant digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapDomain {
    count: usize,
    n_max: u32,
    dim: usize,
}

impl GapDomain {
    pub fn new(count: usize, n_max: u32) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter("gap domain needs n >= 1".into()));
        }
        if n_max < 1 {
            return Err(Error::InvalidParameter("gap truncation n_max must be >= 1".into()));
        }
        let dim = (n_max as usize)
            .checked_pow(count as u32 - 1)
            .ok_or(Error::DimensionGuard { dim: usize::MAX, limit: crate::error::MAX_DIM })?;
        guard_dim(dim)?;
        Ok(Self { count, n_max, dim })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Writes the gaps of `index` into `out` (length `n - 1`).
    pub fn gaps_into(&self, index: usize, out: &mut [u32]) {
        let base = self.n_max as usize;
        let mut r = index;
        for slot in out.iter_mut().rev() {
            *slot = (r % base) as u32 + 1;
            r /= base;
        }
    }

    pub fn gap_vector(&self, index: usize) -> GapVector {
        let mut gaps = vec![0; self.count - 1];
        self.gaps_into(index, &mut gaps);
        GapVector { gaps }
    }

    /// Index of a gap tuple, `None` if any gap leaves `[1, n_max]`.
    pub fn rank(&self, gaps: &[u32]) -> Option<usize> {
        let base = self.n_max as usize;
        let mut r = 0usize;
        for &g in gaps {
            if g < 1 || g > self.n_max {
                return None;
            }
            r = r * base + (g - 1) as usize;
        }
        Some(r)
    }

    pub fn iter(&self) -> impl Iterator<Item = GapVector> + '_ {
        (0..self.dim).map(|i| self.gap_vector(i))
    }
}

/// Materializes the truncated gap domain.
pub fn enumerate_gap_domain(count: usize, n_max: u32) -> Result<Vec<GapVector>> {
    let domain = GapDomain::new(count, n_max)?;
    Ok(domain.iter().collect())
}

/// Orbit of a ring configuration under the translation `x -> x + 1 (mod L)`.
///
/// A Bloch phase index `k` is admissible for the orbit iff
/// `k * size ≡ 0 (mod L)`; only then does the symmetry-adapted vector
/// `Σ_j e^{-2πi k j / L} T^j |rep⟩` survive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentumOrbit {
    len: usize,
    representative: u128,
    size: usize,
}

impl MomentumOrbit {
    pub fn len(&self) -> usize {
        self.len
    }

    /// Representative (smallest mask in the orbit).
    pub fn representative(&self) -> SpinConfig {
        SpinConfig::from_mask(self.representative)
    }

    pub fn representative_mask(&self) -> u128 {
        self.representative
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn admits(&self, k: usize) -> bool {
        (k % self.len) * self.size % self.len == 0
    }

    pub fn admissible_phases(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&k| self.admits(k))
    }

    /// Applies the ring translation `steps` times to the representative.
    pub fn translate(&self, steps: usize) -> u128 {
        (0..steps).fold(self.representative, |m, _| rotate(m, self.len))
    }
}

/// One step of the ring translation on a mask of `len` sites.
pub fn rotate(mask: u128, len: usize) -> u128 {
    let top = 1u128 << (len - 1);
    let full = if len == 128 { u128::MAX } else { (1u128 << len) - 1 };
    ((mask << 1) & full) | u128::from(mask & top != 0)
}

/// Smallest mask in the translation orbit and the number of steps that
/// carry it to `mask` (`mask = T^steps rep`).
pub fn orbit_representative(mask: u128, len: usize) -> (u128, usize) {
    let mut best = mask;
    let mut best_back = 0;
    let mut m = mask;
    for back in 1..len {
        m = rotate(m, len);
        if m == mask {
            break;
        }
        if m < best {
            best = m;
            best_back = back;
        }
    }
    // rotating `mask` by best_back gives rep, so mask = T^(size - best_back) rep
    let size = orbit_size(mask, len);
    (best, (size - best_back % size) % size)
}

fn orbit_size(mask: u128, len: usize) -> usize {
    let mut m = rotate(mask, len);
    let mut s = 1;
    while m != mask {
        m = rotate(m, len);
        s += 1;
    }
    s
}

/// Partitions the `(L, n)` ring sector into translation orbits, ordered by
/// representative.
pub fn momentum_orbits(len: usize, count: usize) -> Result<Vec<MomentumOrbit>> {
    let basis = enumerate_sector(len, count)?;
    let mut orbits: Vec<MomentumOrbit> = basis
        .masks()
        .iter()
        .filter(|&&m| orbit_representative(m, len).0 == m)
        .map(|&m| MomentumOrbit { len, representative: m, size: orbit_size(m, len) })
        .collect();
    orbits.sort_by_key(|o| o.representative);
    Ok(orbits)
}
