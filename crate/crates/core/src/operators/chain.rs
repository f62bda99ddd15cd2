use std::collections::BTreeMap;

use super::{Anisotropy, BoundaryCondition, SparseOperator, Symmetry};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sector_basis::{enumerate_sector, SpinConfig};

/// Action of one nearest-neighbour interaction on the pair of sites
/// `(left, right)`.
///
/// Local states are indexed by `left_down + 2 * right_down`, so index 1 is
/// "left down, right up" and index 2 is "left up, right down".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondTerm<T> {
    pub left: usize,
    pub right: usize,
    pub diag: [T; 4],
    /// Matrix element between local states 1 and 2.
    pub hop: T,
}

impl<T: Real> BondTerm<T> {
    /// Diagonal weight and the optional hopped configuration.
    pub fn apply_mask(&self, mask: u128) -> (T, Option<(u128, T)>) {
        let l = (mask >> (self.left - 1)) & 1;
        let r = (mask >> (self.right - 1)) & 1;
        let d = self.diag[(l + 2 * r) as usize];
        if l != r {
            let flip = (1u128 << (self.left - 1)) | (1u128 << (self.right - 1));
            (d, Some((mask ^ flip, self.hop)))
        } else {
            (d, None)
        }
    }

    /// Applies the bond to a configuration on `[1, len]`.
    pub fn apply(&self, config: &SpinConfig, len: usize) -> Result<Vec<(SpinConfig, T)>> {
        let mask = config
            .to_mask(len)
            .ok_or_else(|| Error::ConfigOutsideSector(config.positions().to_vec()))?;
        let (d, hop) = self.apply_mask(mask);
        let mut out = Vec::with_capacity(2);
        if d != T::zero() {
            out.push((config.clone(), d));
        }
        if let Some((m, a)) = hop {
            out.push((SpinConfig::from_mask(m), a));
        }
        Ok(out)
    }

    /// 4×4 matrix on the local basis.
    pub fn local_matrix(&self) -> [[T; 4]; 4] {
        let mut m = [[T::zero(); 4]; 4];
        for i in 0..4 {
            m[i][i] = self.diag[i];
        }
        m[1][2] = self.hop;
        m[2][1] = self.hop;
        m
    }
}

/// Interaction on bond `x` of a chain of `len` sites. For the cyclic
/// condition `x = len` is the wrap bond `(len, 1)`.
pub fn build_bond_term<T: Real>(
    x: usize,
    len: usize,
    bc: BoundaryCondition<T>,
    a: &Anisotropy<T>,
) -> Result<BondTerm<T>> {
    let last = if matches!(bc, BoundaryCondition::Cyclic) && len >= 2 { len } else { len.saturating_sub(1) };
    if x < 1 || x > last {
        return Err(Error::BondOutOfRange { bond: x, len });
    }
    let right = if x == len { 1 } else { x + 1 };
    let half = T::lit(0.5);
    let mut diag = [T::zero(), half, half, T::zero()];
    if matches!(bc, BoundaryCondition::Kink) {
        // -(α/2)(S³_x - S³_{x+1}) with S³(up) = +1/2
        diag[1] += a.alpha() * half;
        diag[2] -= a.alpha() * half;
    }
    Ok(BondTerm { left: x, right, diag, hop: a.hop() })
}

/// Hamiltonian of the `(len, count)` sector.
pub fn build_sector_hamiltonian<T: Real>(
    len: usize,
    count: usize,
    bc: BoundaryCondition<T>,
    a: &Anisotropy<T>,
) -> Result<SparseOperator<T>> {
    bc.validate()?;
    let basis = enumerate_sector(len, count)?;
    let nbonds = match bc {
        BoundaryCondition::Cyclic if len >= 2 => len,
        _ => len - 1,
    };
    let bonds: Vec<BondTerm<T>> =
        (1..=nbonds).map(|x| build_bond_term(x, len, bc, a)).collect::<Result<_>>()?;
    let field = match bc {
        BoundaryCondition::Droplet { delta } => Some(delta * T::lit(0.5)),
        _ => None,
    };
    let dim = basis.dim();
    let op = SparseOperator::from_row_fn(dim, dim, Symmetry::Symmetric, |i, out| {
        let mask = basis.mask(i);
        let mut diag = T::zero();
        let mut hops: BTreeMap<u128, T> = BTreeMap::new();
        for b in &bonds {
            let (d, h) = b.apply_mask(mask);
            diag += d;
            if let Some((m, amp)) = h {
                *hops.entry(m).or_insert(T::zero()) += amp;
            }
        }
        if let Some(f) = field {
            let down = (mask & 1) + ((mask >> (len - 1)) & 1);
            diag += f * T::from_count(down as usize);
        }
        out.push((i, diag));
        out.extend(hops.into_iter().map(|(m, amp)| (basis.rank_mask(m), amp)));
    });
    Ok(op)
}
