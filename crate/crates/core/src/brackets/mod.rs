//! Bracket (arc system) basis of the highest-weight spaces and the
//! Temperley–Lieb action of the kink bond operators on it.
//!
//! A bracket system on `[1, L]` is a set of arcs `[x, y]` that share no
//! endpoints, never cross, and leave no unpaired site under an arc. Each
//! arc stands for the q-singlet `q^{-½} S⁻_x - q^{½} S⁻_y` acting on the
//! all-up state.

mod maps;

use std::collections::HashMap;

use crate::error::{guard_dim, Error, Result};
use crate::operators::{Anisotropy, SparseOperator, Symmetry};
use crate::scalar::Real;
use crate::sector_basis::{binomial, MAX_SITES};

pub use maps::{
    bracket_to_ising, build_r, hw_energy, su_q_generators, HwEnergy, HwMethod, SuQGenerators,
};

/// A valid arc system; arcs are stored sorted by right endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bracket {
    arcs: Vec<(usize, usize)>,
}

impl Bracket {
    /// Validates exclusion, non-crossing and non-spanning on `[1, len]`.
    pub fn new(mut arcs: Vec<(usize, usize)>, len: usize) -> Result<Self> {
        arcs.sort_by_key(|&(x, y)| (y, x));
        let mut owner = vec![usize::MAX; len + 2];
        for (i, &(x, y)) in arcs.iter().enumerate() {
            if !(1 <= x && x < y && y <= len) {
                return Err(Error::InvalidBracket(format!("arc [{x}, {y}] is not inside [1, {len}]")));
            }
            for s in [x, y] {
                if owner[s] != usize::MAX {
                    return Err(Error::InvalidBracket(format!("site {s} ends two arcs")));
                }
                owner[s] = i;
            }
        }
        for (i, &(x, y)) in arcs.iter().enumerate() {
            for &(u, v) in &arcs[i + 1..] {
                if (x < u && u < y && y < v) || (u < x && x < v && v < y) {
                    return Err(Error::InvalidBracket(format!("arcs [{x}, {y}] and [{u}, {v}] cross")));
                }
            }
            if let Some(s) = (x + 1..y).find(|&s| owner[s] == usize::MAX) {
                return Err(Error::InvalidBracket(format!("arc [{x}, {y}] spans the free site {s}")));
            }
        }
        Ok(Self { arcs })
    }

    /// The empty system (the all-up vector).
    pub fn empty() -> Self {
        Self { arcs: Vec::new() }
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Number of arcs, i.e. of down spins in every term of the vector.
    pub fn count(&self) -> usize {
        self.arcs.len()
    }

    /// Arc with an endpoint at `site`.
    pub fn arc_at(&self, site: usize) -> Option<(usize, usize)> {
        self.arcs.iter().copied().find(|&(x, y)| x == site || y == site)
    }

    fn key(&self) -> (Vec<usize>, Vec<usize>) {
        (self.arcs.iter().map(|a| a.1).collect(), self.arcs.iter().map(|a| a.0).collect())
    }

    fn replaced(&self, remove: &[(usize, usize)], add: &[(usize, usize)], len: usize) -> Self {
        let arcs = self.arcs.iter().copied().filter(|a| !remove.contains(a)).chain(add.iter().copied()).collect();
        Self::new(arcs, len).expect("Temperley-Lieb moves preserve validity")
    }
}

/// `dim H^hw(n) = C(L, n) - C(L, n-1)`.
pub fn hw_dimension(len: usize, count: usize) -> u128 {
    let below = if count == 0 { 0 } else { binomial(len, count - 1) };
    binomial(len, count).saturating_sub(below)
}

/// All bracket systems of a highest-weight space, with a rank lookup.
#[derive(Debug, Clone)]
pub struct HighestWeightBasis {
    len: usize,
    count: usize,
    brackets: Vec<Bracket>,
    rank: HashMap<Bracket, usize>,
}

impl HighestWeightBasis {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn dim(&self) -> usize {
        self.brackets.len()
    }

    pub fn brackets(&self) -> &[Bracket] {
        &self.brackets
    }

    pub fn bracket(&self, i: usize) -> &Bracket {
        &self.brackets[i]
    }

    pub fn rank(&self, b: &Bracket) -> Option<usize> {
        self.rank.get(b).copied()
    }
}

/// Enumerates `V([1, L], n)`, ordered by right endpoints then left endpoints.
pub fn enumerate_brackets(len: usize, count: usize) -> Result<HighestWeightBasis> {
    if len > MAX_SITES {
        return Err(Error::InvalidSector { len, count, reason: "chain too long" });
    }
    if 2 * count > len {
        return Err(Error::InvalidSector { len, count, reason: "needs n <= L/2" });
    }
    guard_dim(usize::try_from(hw_dimension(len, count)).unwrap_or(usize::MAX))?;

    // scan left to right: each site opens an arc, closes the innermost one,
    // or stays free, which is only allowed outside every arc
    fn walk(
        site: usize,
        len: usize,
        left: usize,
        open: &mut Vec<usize>,
        arcs: &mut Vec<(usize, usize)>,
        out: &mut Vec<Bracket>,
    ) {
        if site > len {
            if open.is_empty() && left == 0 {
                out.push(Bracket { arcs: arcs.clone() });
            }
            return;
        }
        let rest = len - site;
        if open.is_empty() && rest >= 2 * left {
            walk(site + 1, len, left, open, arcs, out);
        }
        if left > 0 && rest >= open.len() + 1 + 2 * (left - 1) {
            open.push(site);
            walk(site + 1, len, left - 1, open, arcs, out);
            open.pop();
        }
        if let Some(x) = open.pop() {
            arcs.push((x, site));
            walk(site + 1, len, left, open, arcs, out);
            arcs.pop();
            open.push(x);
        }
    }

    let mut brackets = Vec::new();
    walk(1, len, count, &mut Vec::new(), &mut Vec::new(), &mut brackets);
    brackets.sort_by_cached_key(Bracket::key);
    let rank = brackets.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    Ok(HighestWeightBasis { len, count, brackets, rank })
}

/// Scalar picked up by a Temperley–Lieb move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TlScalar {
    One,
    /// Closed loop, worth `-[2]_q`.
    Loop,
}

impl TlScalar {
    pub fn value<T: Real>(self, a: &Anisotropy<T>) -> T {
        match self {
            Self::One => T::one(),
            Self::Loop => -a.q_two(),
        }
    }
}

/// `U_x ψ(source) = scalar · ψ(result)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TlMove {
    pub source: Bracket,
    pub site: usize,
    pub result: Bracket,
    pub scalar: TlScalar,
}

/// Action of `U_x = -[2]_q h^k_{x,x+1}` on a bracket vector; `None` when
/// both sites are free, where the vector is annihilated.
pub fn tl_apply(x: usize, b: &Bracket, len: usize) -> Result<Option<TlMove>> {
    if x < 1 || x >= len {
        return Err(Error::BondOutOfRange { bond: x, len });
    }
    let here = b.arc_at(x);
    let next = b.arc_at(x + 1);
    let bond = (x, x + 1);
    let (result, scalar) = match (here, next) {
        (None, None) => return Ok(None),
        (Some(a), None) => (b.replaced(&[a], &[bond], len), TlScalar::One),
        (None, Some(a)) => (b.replaced(&[a], &[bond], len), TlScalar::One),
        (Some(a), Some(c)) if a == c => (b.clone(), TlScalar::Loop),
        (Some(a), Some(c)) => {
            let joined = if a.1 == x && c.0 == x + 1 {
                (a.0, c.1)
            } else if a.1 == x && c.1 == x + 1 {
                (c.0, a.0)
            } else {
                (c.1, a.1)
            };
            (b.replaced(&[a, c], &[bond, joined], len), TlScalar::One)
        }
    };
    Ok(Some(TlMove { source: b.clone(), site: x, result, scalar }))
}

/// Matrix of `U_x` in the bracket basis.
pub fn tl_operator<T: Real>(basis: &HighestWeightBasis, x: usize, a: &Anisotropy<T>) -> Result<SparseOperator<T>> {
    let mut t = Vec::with_capacity(basis.dim());
    for (col, b) in basis.brackets().iter().enumerate() {
        if let Some(m) = tl_apply(x, b, basis.len())? {
            let row = basis.rank(&m.result).expect("moves stay in the basis");
            t.push((row, col, m.scalar.value(a)));
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), basis.dim(), Symmetry::General, &t))
}

/// Kink Hamiltonian on `H^hw(n)` in the bracket basis: column `b` is
/// `Σ_x -(scalar/[2]_q) ψ(b')`.
pub fn build_hw_matrix<T: Real>(len: usize, count: usize, a: &Anisotropy<T>) -> Result<SparseOperator<T>> {
    let basis = enumerate_brackets(len, count)?;
    hw_matrix_on(&basis, a)
}

/// As [`build_hw_matrix`] on an already enumerated basis.
pub fn hw_matrix_on<T: Real>(basis: &HighestWeightBasis, a: &Anisotropy<T>) -> Result<SparseOperator<T>> {
    let w = -a.q_two().recip();
    let mut t = Vec::new();
    for (col, b) in basis.brackets().iter().enumerate() {
        for x in 1..basis.len() {
            if let Some(m) = tl_apply(x, b, basis.len())? {
                let row = basis.rank(&m.result).expect("moves stay in the basis");
                t.push((row, col, w * m.scalar.value(a)));
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.dim(), basis.dim(), Symmetry::General, &t))
}
