//! Finitely generated abelian groups and explicit quotient maps.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::{snf, Snf};

/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | ... | d_k`, all `d_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbGroup {
    pub fn trivial() -> Self {
        AbGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// Builds from arbitrary invariant factors, dropping units and keeping order.
    pub fn new(free_rank: usize, mut torsion: Vec<BigInt>) -> Self {
        torsion.retain(|d| d > &BigInt::one());
        debug_assert!(torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        AbGroup { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, d| a * d)
    }

    /// Rationalization: the same free rank, no torsion.
    pub fn rationalize(&self) -> Self {
        AbGroup::free(self.free_rank)
    }

    /// Checks the invariant-factor form.
    pub fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|d| d >= &BigInt::from(2)) && self.torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}Z"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot parse abelian group from {0:?}")]
pub struct ParseGroupError(String);

impl FromStr for AbGroup {
    type Err = ParseGroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGroupError(s.to_string());
        let s = s.trim();
        if s == "0" {
            return Ok(AbGroup::trivial());
        }
        let mut free = 0usize;
        let mut torsion = Vec::new();
        for part in s.split(" x ") {
            let part = part.trim();
            if part == "Z" {
                free += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                free += r.parse::<usize>().map_err(|_| err())?;
            } else if let Some(rest) = part.strip_prefix("Z/") {
                let d = rest.strip_suffix('Z').ok_or_else(err)?;
                torsion.push(d.parse::<BigInt>().map_err(|_| err())?);
            } else {
                return Err(err());
            }
        }
        let g = AbGroup { free_rank: free, torsion };
        if !g.is_canonical() {
            return Err(err());
        }
        Ok(g)
    }
}

/// `Z^cols / rowspace(m)`.
pub fn cokernel_group(m: &IntMatrix) -> AbGroup {
    let s = snf(m);
    AbGroup::new(m.cols() - s.rank(), s.diag.clone())
}

/// Explicit coordinates on `Z^n / rowspace(relations)`.
///
/// An element `x` maps to `y = x · V`; coordinates `y_i` for `i < rank` are
/// read modulo the invariant factor `d_i` (dropped when `d_i = 1`), the rest
/// are free coordinates.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    snf: Snf,
    ambient: usize,
}

/// The image of an element in `Z^free ⊕ ⊕ Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientCoords {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl QuotientCoords {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|x| x.is_zero()) && self.torsion.iter().all(|x| x.is_zero())
    }
}

impl QuotientMap {
    pub fn new(relations: &IntMatrix) -> Self {
        QuotientMap { snf: snf(relations), ambient: relations.cols() }
    }

    pub fn group(&self) -> AbGroup {
        AbGroup::new(self.ambient - self.snf.rank(), self.snf.diag.clone())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn coords(&self, x: &[BigInt]) -> QuotientCoords {
        assert_eq!(x.len(), self.ambient);
        let y = self.snf.v.vec_mul(x);
        let r = self.snf.rank();
        let mut torsion = Vec::new();
        for i in 0..r {
            let d = &self.snf.diag[i];
            if d > &BigInt::one() {
                torsion.push(y[i].mod_floor(d));
            }
        }
        QuotientCoords { free: y[r..].to_vec(), torsion }
    }

    /// Representatives in `Z^n` of a basis of the free part.
    pub fn free_generators(&self) -> Vec<Vec<BigInt>> {
        (self.snf.rank()..self.ambient).map(|i| self.snf.v_inv.row_vec(i)).collect()
    }

    /// Representatives in `Z^n` of generators of the cyclic torsion summands.
    pub fn torsion_generators(&self) -> Vec<(Vec<BigInt>, BigInt)> {
        (0..self.snf.rank())
            .filter(|&i| self.snf.diag[i] > BigInt::one())
            .map(|i| (self.snf.v_inv.row_vec(i), self.snf.diag[i].clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernels() {
        let m = IntMatrix::from_i64(2, 3, &[1, 1, -2, 0, -3, 3]);
        let g = cokernel_group(&m);
        assert_eq!(g, AbGroup::new(1, vec![BigInt::from(3)]));
        assert_eq!(g.to_string(), "Z x Z/3Z");
        assert_eq!(cokernel_group(&IntMatrix::zeros(0, 2)), AbGroup::free(2));
        assert!(cokernel_group(&IntMatrix::identity(2)).is_trivial());
    }

    #[test]
    fn render_and_parse() {
        for s in ["0", "Z", "Z^5", "Z^3 x Z/2Z", "Z/3Z", "Z/2Z x Z/4Z"] {
            let g: AbGroup = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("Z/4Z x Z/2Z".parse::<AbGroup>().is_err());
        assert!("Q".parse::<AbGroup>().is_err());
    }

    #[test]
    fn quotient_coordinates() {
        let m = IntMatrix::from_i64(2, 3, &[1, 1, -2, 0, -3, 3]);
        let q = QuotientMap::new(&m);
        for row in m.to_rows() {
            assert!(q.coords(&row).is_zero());
        }
        // x_1 - x_2 is 3-torsion but nonzero.
        let x = vec![BigInt::from(0), BigInt::from(1), BigInt::from(-1)];
        assert!(!q.coords(&x).is_zero());
        let x3: Vec<BigInt> = x.iter().map(|v| v * 3).collect();
        assert!(q.coords(&x3).is_zero());
    }
}
