//! Exact rational elimination: ranks, solving, and coordinate maps for
//! lattice bases.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{IntMatrix, RatMatrix};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn int_to_rat(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Converts to integers if every entry is integral.
pub fn rat_to_int(v: &[Rat]) -> Option<Vec<BigInt>> {
    v.iter().map(|x| if x.is_integer() { Some(x.to_integer()) } else { None }).collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(a: &mut RatMatrix) -> Vec<usize> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else { continue };
        a.swap_rows(r, p);
        let inv = a.get(r, c).recip();
        for j in 0..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i != r && !a.get(i, c).is_zero() {
                let f = -a.get(i, c).clone();
                a.add_row_multiple(i, r, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_rat(a: &RatMatrix) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

pub fn rank_int(a: &IntMatrix) -> usize {
    rank_rat(&a.to_rational())
}

/// Some solution of `a · x = b` (free variables set to zero).
pub fn solve(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let mut aug = RatMatrix::zeros(a.rows(), n + 1);
    for i in 0..a.rows() {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n, b[i].clone());
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, n).clone();
    }
    Some(x)
}

/// Basis of the rational nullspace of `x ↦ a · x`.
pub fn nullspace(a: &RatMatrix) -> Vec<Vec<Rat>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m.get(r, f).clone();
            }
            v
        })
        .collect()
}

/// Determinant of a square rational matrix.
pub fn det_rat(a: &RatMatrix) -> Rat {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut m = a.clone();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else { return Rat::zero() };
        if p != c {
            m.swap_rows(p, c);
            d = -d;
        }
        let piv = m.get(c, c).clone();
        d *= &piv;
        for i in c + 1..n {
            if !m.get(i, c).is_zero() {
                let f = -(m.get(i, c) / &piv);
                m.add_row_multiple(i, c, &f);
            }
        }
    }
    d
}

/// Inverse of a square rational matrix, if invertible.
pub fn inverse(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    if n == 0 {
        return Some(RatMatrix::zeros(0, 0));
    }
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n + i, Rat::one());
    }
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let idx: Vec<usize> = (n..2 * n).collect();
    Some(aug.select_cols(&idx))
}

/// Coordinates with respect to a fixed set of linearly independent rows.
///
/// Stores the inverse of a maximal invertible column minor so repeated
/// coordinate queries cost one small product plus a membership check.
#[derive(Clone, Debug)]
pub struct CoordBasis {
    rows: RatMatrix,
    pivots: Vec<usize>,
    inv: RatMatrix,
}

impl CoordBasis {
    pub fn new(basis: &IntMatrix) -> Self {
        Self::from_rational(basis.to_rational())
    }

    pub fn from_rational(rows: RatMatrix) -> Self {
        let mut echelon = rows.clone();
        let pivots = rref(&mut echelon);
        assert_eq!(pivots.len(), rows.rows(), "basis rows must be linearly independent");
        let minor = rows.select_cols(&pivots);
        let inv = inverse(&minor).expect("pivot minor is invertible");
        CoordBasis { rows, pivots, inv }
    }

    pub fn len(&self) -> usize {
        self.rows.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.rows() == 0
    }

    pub fn ambient(&self) -> usize {
        self.rows.cols()
    }

    /// Coordinates `c` with `c · rows = v`, or `None` when `v` is outside the span.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.ambient());
        let sub: Vec<Rat> = self.pivots.iter().map(|&j| v[j].clone()).collect();
        let c = self.inv.vec_mul(&sub);
        if self.rows.vec_mul(&c) == v {
            Some(c)
        } else {
            None
        }
    }

    pub fn coords_int(&self, v: &[BigInt]) -> Option<Vec<Rat>> {
        self.coords(&int_to_rat(v))
    }

    /// Integer coordinates; `None` when `v` is not in the lattice spanned by the rows.
    pub fn lattice_coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        self.coords_int(v).and_then(|c| rat_to_int(&c))
    }
}
