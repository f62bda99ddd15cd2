//! Compressed-row sparse matrices.

use std::fmt::Write as _;

use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Structural promise of a [`SparseOperator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    /// Real entries with `a(i, j) = a(j, i)`.
    Symmetric,
    /// `a(i, j) = conj(a(j, i))`.
    Hermitian,
}

/// CSR matrix. Columns within a row are strictly ascending, so products
/// accumulate in a fixed order and are bit-reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator<S> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<S>,
    symmetry: Symmetry,
}

impl<S: Scalar> SparseOperator<S> {
    /// Builds row by row. `fill(i, out)` pushes `(column, value)` pairs for
    /// row `i` in any order; duplicates are summed and exact zeros dropped.
    pub fn from_row_fn<F>(nrows: usize, ncols: usize, symmetry: Symmetry, mut fill: F) -> Self
    where
        F: FnMut(usize, &mut Vec<(usize, S)>),
    {
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut buf = Vec::new();
        for i in 0..nrows {
            buf.clear();
            fill(i, &mut buf);
            buf.sort_by_key(|e| e.0);
            let mut idx = 0;
            while idx < buf.len() {
                let c = buf[idx].0;
                let mut v = buf[idx].1;
                idx += 1;
                while idx < buf.len() && buf[idx].0 == c {
                    v += buf[idx].1;
                    idx += 1;
                }
                assert!(c < ncols, "column {c} out of range {ncols}");
                if v != S::zero() {
                    cols.push(c as u32);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self { nrows, ncols, row_ptr, cols, vals, symmetry }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        symmetry: Symmetry,
        triplets: &[(usize, usize, S)],
    ) -> Self {
        let mut by_row: Vec<Vec<(usize, S)>> = vec![Vec::new(); nrows];
        for &(i, j, v) in triplets {
            by_row[i].push((j, v));
        }
        Self::from_row_fn(nrows, ncols, symmetry, |i, out| out.extend_from_slice(&by_row[i]))
    }

    /// Row-major dense input; zeros are skipped.
    pub fn from_dense(nrows: usize, ncols: usize, symmetry: Symmetry, data: &[S]) -> Self {
        assert_eq!(data.len(), nrows * ncols);
        Self::from_row_fn(nrows, ncols, symmetry, |i, out| {
            out.extend((0..ncols).map(|j| (j, data[i * ncols + j])));
        })
    }

    pub fn identity(dim: usize) -> Self {
        let symmetry = if S::IS_COMPLEX { Symmetry::Hermitian } else { Symmetry::Symmetric };
        Self::from_row_fn(dim, dim, symmetry, |i, out| out.push((i, S::one())))
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::from_row_fn(nrows, ncols, Symmetry::General, |_, _| {})
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Side length; panics on rectangular operators.
    pub fn dim(&self) -> usize {
        assert_eq!(self.nrows, self.ncols, "dim() of a rectangular operator");
        self.nrows
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_self_adjoint(&self) -> bool {
        matches!(self.symmetry, Symmetry::Symmetric | Symmetry::Hermitian)
    }

    /// Overrides the structural flag (after checking it if needed).
    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    /// Columns and values of row `i`.
    pub fn row(&self, i: usize) -> (&[u32], &[S]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        let (c, v) = self.row(i);
        match c.binary_search(&(j as u32)) {
            Ok(p) => v[p],
            Err(_) => S::zero(),
        }
    }

    /// Iterates stored entries as `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j as usize, x))
        })
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[S]) -> Result<Vec<S>> {
        let mut y = vec![S::zero(); self.nrows];
        self.matvec_into(x, &mut y)?;
        Ok(y)
    }

    /// `y = A x` into a caller-provided buffer.
    pub fn matvec_into(&self, x: &[S], y: &mut [S]) -> Result<()> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, got: x.len() });
        }
        if y.len() != self.nrows {
            return Err(Error::DimensionMismatch { expected: self.nrows, got: y.len() });
        }
        for (i, yi) in y.iter_mut().enumerate() {
            let (c, v) = self.row(i);
            let mut acc = S::zero();
            for (&j, &a) in c.iter().zip(v) {
                acc += a * x[j as usize];
            }
            *yi = acc;
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t: Vec<(usize, usize, S)> =
            self.triplets().map(|(i, j, v)| (j, i, v.conj())).collect();
        t.sort_by_key(|e| (e.0, e.1));
        Self::from_triplets(self.ncols, self.nrows, self.symmetry, &t)
    }

    /// Sparse product `A B`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch { expected: self.ncols, got: other.nrows });
        }
        Ok(Self::from_row_fn(self.nrows, other.ncols, Symmetry::General, |i, out| {
            let (c, v) = self.row(i);
            for (&k, &a) in c.iter().zip(v) {
                let (c2, v2) = other.row(k as usize);
                out.extend(c2.iter().zip(v2).map(|(&j, &b)| (j as usize, a * b)));
            }
        }))
    }

    /// `a A + b B`.
    pub fn linear_combination(&self, a: S, other: &Self, b: S) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows * self.ncols,
                got: other.nrows * other.ncols,
            });
        }
        let symmetry = if self.symmetry == other.symmetry { self.symmetry } else { Symmetry::General };
        Ok(Self::from_row_fn(self.nrows, self.ncols, symmetry, |i, out| {
            let (c, v) = self.row(i);
            out.extend(c.iter().zip(v).map(|(&j, &x)| (j as usize, a * x)));
            let (c, v) = other.row(i);
            out.extend(c.iter().zip(v).map(|(&j, &x)| (j as usize, b * x)));
        }))
    }

    /// `c 1 + s A` for a square operator.
    pub fn shifted(&self, c: S, s: S) -> Self {
        let n = self.dim();
        Self::from_row_fn(n, n, self.symmetry, |i, out| {
            let (cols, v) = self.row(i);
            out.extend(cols.iter().zip(v).map(|(&j, &x)| (j as usize, s * x)));
            out.push((i, c));
        })
    }

    /// Principal submatrix on the (sorted, distinct) index subset.
    pub fn restrict(&self, subset: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.ncols];
        for (new, &old) in subset.iter().enumerate() {
            pos[old] = new;
        }
        Self::from_row_fn(subset.len(), subset.len(), self.symmetry, |i, out| {
            let (c, v) = self.row(subset[i]);
            for (&j, &x) in c.iter().zip(v) {
                let p = pos[j as usize];
                if p != usize::MAX {
                    out.push((p, x));
                }
            }
        })
    }

    /// Largest absolute row sum, `max_i Σ_j |a_ij|`.
    pub fn max_row_sum(&self) -> S::Real {
        (0..self.nrows)
            .map(|i| self.row(i).1.iter().map(|v| v.modulus()).sum::<S::Real>())
            .fold(S::Real::zero(), |a, b| a.max(b))
    }

    /// Largest absolute column sum, `max_j Σ_i |a_ij|`.
    pub fn max_col_sum(&self) -> S::Real {
        let mut sums = vec![S::Real::zero(); self.ncols];
        for (_, j, v) in self.triplets() {
            sums[j] += v.modulus();
        }
        sums.into_iter().fold(S::Real::zero(), |a, b| a.max(b))
    }

    /// Largest entry modulus of `A - adjoint(A)`; zero means exactly
    /// Hermitian (or symmetric for real entries).
    pub fn hermiticity_defect(&self) -> S::Real {
        if self.nrows != self.ncols {
            return S::Real::infinity();
        }
        let mut worst = S::Real::zero();
        for (i, j, v) in self.triplets() {
            worst = worst.max((v - self.get(j, i).conj()).modulus());
        }
        worst
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<S> {
        let mut d = vec![S::zero(); self.nrows * self.ncols];
        for (i, j, v) in self.triplets() {
            d[i * self.ncols + j] = v;
        }
        d
    }

    /// Entries as `Complex`.
    pub fn to_complex(&self) -> SparseOperator<num_complex::Complex<S::Real>> {
        SparseOperator {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals: self.vals.iter().map(|v| v.to_complex()).collect(),
            symmetry: match self.symmetry {
                Symmetry::Symmetric => Symmetry::Hermitian,
                s => s,
            },
        }
    }

    /// Plain-text triplet dump: a header `nrows ncols nnz`, then one
    /// `row col value` line per entry (0-based, 17 significant digits;
    /// complex values as `re im`).
    pub fn to_triplet_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.nrows, self.ncols, self.nnz());
        for (i, j, v) in self.triplets() {
            if S::IS_COMPLEX {
                let _ = writeln!(s, "{i} {j} {:.16e} {:.16e}", v.re().as_f64(), v.im().as_f64());
            } else {
                let _ = writeln!(s, "{i} {j} {:.16e}", v.re().as_f64());
            }
        }
        s
    }
}

impl<T: Real> SparseOperator<T> {
    /// Parses the format written by [`SparseOperator::to_triplet_text`]
    /// (real entries only).
    pub fn from_triplet_text(text: &str, symmetry: Symmetry) -> Result<Self> {
        let bad = |m: &str| Error::InvalidParameter(format!("triplet text: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<usize> = lines
            .next()
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("header")))
            .collect::<Result<_>>()?;
        let [nrows, ncols, nnz] = header[..] else { return Err(bad("header needs 3 fields")) };
        let mut t = Vec::with_capacity(nnz);
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad(line));
            }
            let i: usize = f[0].parse().map_err(|_| bad(line))?;
            let j: usize = f[1].parse().map_err(|_| bad(line))?;
            let v: f64 = f[2].parse().map_err(|_| bad(line))?;
            if i >= nrows || j >= ncols {
                return Err(bad(line));
            }
            t.push((i, j, T::lit(v)));
        }
        if t.len() != nnz {
            return Err(bad("entry count differs from header"));
        }
        Ok(Self::from_triplets(nrows, ncols, symmetry, &t))
    }

    /// True when every stored entry is `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.vals.iter().all(|&v| v >= T::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_matvec_is_identity() {
        let id = SparseOperator::<f64>::identity(4);
        let v = vec![1.0, -2.0, 3.5, 0.0];
        assert_eq!(id.matvec(&v).unwrap(), v);
    }

    #[test]
    fn duplicates_merge_and_zeros_vanish() {
        let a = SparseOperator::from_triplets(
            2,
            2,
            Symmetry::General,
            &[(0, 1, 1.0), (0, 1, 2.0), (1, 0, 1.0), (1, 0, -1.0)],
        );
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(0, 1), 3.0);
    }

    #[test]
    fn matvec_rejects_wrong_length() {
        let id = SparseOperator::<f64>::identity(3);
        assert!(matches!(id.matvec(&[1.0]), Err(Error::DimensionMismatch { expected: 3, got: 1 })));
    }

    #[test]
    fn compose_and_adjoint() {
        let a = SparseOperator::from_dense(2, 3, Symmetry::General, &[1.0, 0.0, 2.0, 0.0, 3.0, 0.0]);
        let ata = a.adjoint().compose(&a).unwrap();
        assert_eq!(ata.to_dense(), vec![1.0, 0.0, 2.0, 0.0, 9.0, 0.0, 2.0, 0.0, 4.0]);
        assert_eq!(ata.hermiticity_defect(), 0.0);
        assert_eq!(a.max_col_sum(), 3.0);
        assert_eq!(a.max_row_sum(), 3.0);
    }

    #[test]
    fn hermitian_defect_detects_conjugation() {
        let i = Complex64::new(0.0, 1.0);
        let h = SparseOperator::from_dense(2, 2, Symmetry::Hermitian, &[1.0.into(), i, -i, 2.0.into()]);
        assert_eq!(h.hermiticity_defect(), 0.0);
        let bad = SparseOperator::from_dense(2, 2, Symmetry::General, &[1.0.into(), i, i, 2.0.into()]);
        assert!(bad.hermiticity_defect() > 1.0);
    }

    #[test]
    fn restriction_and_shift() {
        let k = SparseOperator::from_dense(3, 3, Symmetry::Symmetric, &[0.0, 1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 2.0, 5.0]);
        let j = k.restrict(&[1, 2]);
        assert_eq!(j.to_dense(), vec![0.0, 2.0, 2.0, 5.0]);
        let s = k.shifted(2.0, -1.0);
        assert_eq!(s.get(2, 2), -3.0);
        assert_eq!(s.get(0, 1), -1.0);
    }

    #[test]
    fn triplet_text_round_trip() {
        let a = SparseOperator::from_dense(2, 3, Symmetry::General, &[0.1, 0.0, -2.5, 0.0, 1.0 / 3.0, 0.0]);
        let text = a.to_triplet_text();
        assert!(text.starts_with("2 3 3\n"));
        let b = SparseOperator::<f64>::from_triplet_text(&text, Symmetry::General).unwrap();
        assert_eq!(a, b);
    }
}
