use num_complex::Complex;

use super::{build_bond_term, Anisotropy, BoundaryCondition, SparseOperator, Symmetry};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sector_basis::{momentum_orbits, orbit_representative};

/// Block of the cyclic `(len, count)` Hamiltonian with translation
/// eigenvalue `e^{2πik/len}`.
///
/// The basis is the admissible orbits of [`momentum_orbits`] (in that
/// order), each represented by the Bloch vector
/// `|r, k⟩ = s_r^{-1/2} Σ_j e^{-2πikj/len} T^j |r⟩`.
pub fn build_momentum_block<T: Real>(
    len: usize,
    count: usize,
    k: usize,
    a: &Anisotropy<T>,
) -> Result<SparseOperator<Complex<T>>> {
    if k >= len {
        return Err(Error::InvalidParameter(format!("momentum index {k} outside Z/{len}Z")));
    }
    let orbits: Vec<_> = momentum_orbits(len, count)?.into_iter().filter(|o| o.admits(k)).collect();
    let index: std::collections::HashMap<u128, usize> =
        orbits.iter().enumerate().map(|(i, o)| (o.representative_mask(), i)).collect();
    let nbonds = if len >= 2 { len } else { 0 };
    let bonds = (1..=nbonds)
        .map(|x| build_bond_term(x, len, BoundaryCondition::Cyclic, a))
        .collect::<Result<Vec<_>>>()?;

    // Columns are generated from H|rep⟩ and transposed into rows afterwards.
    let mut triplets = Vec::new();
    for (col, orbit) in orbits.iter().enumerate() {
        let rep = orbit.representative_mask();
        let s_col = T::from_count(orbit.size());
        let mut diag = T::zero();
        for b in &bonds {
            let (d, h) = b.apply_mask(rep);
            diag += d;
            if let Some((m, amp)) = h {
                let (target, steps) = orbit_representative(m, len);
                // inadmissible target orbits carry no weight in this block
                if let Some(&row) = index.get(&target) {
                    let s_row = T::from_count(orbits[row].size());
                    let w = amp * (s_col / s_row).sqrt();
                    // reduce k * steps mod L before taking the angle
                    let ph = T::TAU() * T::from_count(k * steps % len) / T::from_count(len);
                    triplets.push((row, col, Complex::from_polar(w, ph)));
                }
            }
        }
        triplets.push((col, col, Complex::new(diag, T::zero())));
    }
    let dim = orbits.len();
    Ok(SparseOperator::from_triplets(dim, dim, Symmetry::Hermitian, &triplets))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_magnon_ring_dispersion() {
        let a = Anisotropy::<f64>::new(0.5).unwrap();
        let b0 = build_momentum_block(4, 1, 0, &a).unwrap();
        assert_eq!(b0.dim(), 1);
        assert!((b0.get(0, 0).re - 0.2).abs() < 1e-15);
        let b2 = build_momentum_block(4, 1, 2, &a).unwrap();
        assert!((b2.get(0, 0).re - 1.8).abs() < 1e-15);
        assert!(b2.get(0, 0).im.abs() < 1e-15);
    }

    #[test]
    fn blocks_are_hermitian_and_sizes_add_up() {
        let a = Anisotropy::<f64>::new(0.3).unwrap();
        for len in 2..=10 {
            for n in 0..=3.min(len) {
                let mut total = 0;
                for k in 0..len {
                    let b = build_momentum_block(len, n, k, &a).unwrap();
                    assert!(b.hermiticity_defect() < 1e-15, "L={len} n={n} k={k}");
                    total += b.nrows();
                }
                assert_eq!(total as u128, crate::sector_basis::binomial(len, n));
            }
        }
    }

    #[test]
    fn rejects_momentum_outside_range() {
        let a = Anisotropy::<f64>::new(0.5).unwrap();
        assert!(build_momentum_block(4, 1, 4, &a).is_err());
    }
}
