//! Sublattices of `Z^n` in Hermite normal form.

use num_bigint::BigInt;
use num_traits::One;

use super::matrix::IntMatrix;
use super::rational::CoordBasis;
use super::snf::{hnf, saturate_rows};

/// A sublattice of `Z^n`, stored by an HNF basis (rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl Sublattice {
    /// Lattice generated by the rows of `gens`.
    pub fn span(gens: &IntMatrix) -> Self {
        let basis = if gens.rows() == 0 { IntMatrix::zeros(0, gens.cols()) } else { hnf(gens) };
        Sublattice { ambient_rank: gens.cols(), basis }
    }

    pub fn from_rows(rows: &[Vec<BigInt>], ambient_rank: usize) -> Self {
        Self::span(&IntMatrix::from_rows(rows, ambient_rank))
    }

    pub fn full(n: usize) -> Self {
        Sublattice { ambient_rank: n, basis: IntMatrix::identity(n) }
    }

    pub fn zero(n: usize) -> Self {
        Sublattice { ambient_rank: n, basis: IntMatrix::zeros(0, n) }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// The saturation `span_Q(L) ∩ Z^n` and the index of `L` in it.
    pub fn saturate(&self) -> (Sublattice, BigInt) {
        if self.rank() == 0 {
            return (self.clone(), BigInt::one());
        }
        let (basis, index) = saturate_rows(&self.basis);
        (Sublattice { ambient_rank: self.ambient_rank, basis }, index)
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate().1.is_one()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }

    /// Integer coordinates of `v` in the HNF basis.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        CoordBasis::new(&self.basis).lattice_coords(v)
    }

    pub fn sum(&self, other: &Sublattice) -> Sublattice {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        Self::span(&self.basis.vstack(&other.basis))
    }

    pub fn contains_lattice(&self, other: &Sublattice) -> bool {
        other.basis.to_rows().iter().all(|r| self.contains(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: &[&[i64]], n: usize) -> Sublattice {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Sublattice::from_rows(&rows, n)
    }

    #[test]
    fn saturation_indices() {
        assert_eq!(lat(&[&[1, 0], &[0, 3]], 2).saturate(), (Sublattice::full(2), BigInt::from(3)));
        let (s, i) = lat(&[&[1, 0]], 2).saturate();
        assert_eq!(s, lat(&[&[1, 0]], 2));
        assert!(i.is_one());
        assert_eq!(lat(&[&[2, 0], &[0, 2]], 2).saturate().1, BigInt::from(4));
    }

    #[test]
    fn membership_and_sum() {
        let a = lat(&[&[1, 1]], 2);
        let b = lat(&[&[1, -1]], 2);
        let s = a.sum(&b);
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&[BigInt::from(2), BigInt::from(0)]));
        assert!(!s.contains(&[BigInt::from(1), BigInt::from(0)]));
        assert!(s.contains_lattice(&a));
    }
}
