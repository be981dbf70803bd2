use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::Fan;
use crate::zlinalg::rational::rank_int;
use crate::zlinalg::snf::gcd_vec;
use crate::zlinalg::{strict_lp_feasible, Rat, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationLevel {
    Combinatorial,
    Geometric,
}

/// Structured report of every violated fan property.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    /// Rays whose coordinates have a common factor, with that factor.
    pub non_primitive: Vec<(usize, BigInt)>,
    pub duplicate_rays: Vec<(usize, usize)>,
    /// Cones whose ray generators are linearly dependent.
    pub dependent_cones: Vec<Vec<usize>>,
    /// Pairs of cones whose relative interiors meet.
    pub overlaps: Vec<(Vec<usize>, Vec<usize>)>,
    pub geometric_checked: bool,
}

impl Diagnostics {
    pub fn is_ok(&self) -> bool {
        self.non_primitive.is_empty() && self.duplicate_rays.is_empty() && self.dependent_cones.is_empty() && self.overlaps.is_empty()
    }

    /// Everything that is needed before any lattice computation may run.
    pub fn is_simplicial(&self) -> bool {
        self.dependent_cones.is_empty() && self.duplicate_rays.is_empty()
    }
}

impl Fan {
    pub fn validate(&self, level: ValidationLevel) -> Diagnostics {
        let mut d = Diagnostics::default();
        for (i, r) in self.rays().iter().enumerate() {
            let g = gcd_vec(r);
            if !g.is_one() {
                d.non_primitive.push((i, g));
            }
            for j in 0..i {
                if self.rays()[j] == *r {
                    d.duplicate_rays.push((j, i));
                }
            }
        }
        for c in self.maximal_cones() {
            if rank_int(&self.ray_matrix(c)) < self.cone_dim(c) {
                d.dependent_cones.push(self.cone(c).to_vec());
            }
        }
        if level == ValidationLevel::Geometric && d.dependent_cones.is_empty() {
            d.geometric_checked = true;
            for a in 1..self.num_cones() {
                for b in 1..a {
                    if self.is_face(a, b) || self.is_face(b, a) {
                        continue;
                    }
                    if self.interiors_meet(a, b) {
                        d.overlaps.push((self.cone(b).to_vec(), self.cone(a).to_vec()));
                    }
                }
            }
        }
        d
    }

    /// Whether the relative interiors of two cones share a point.
    fn interiors_meet(&self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.ray_matrix(a), self.ray_matrix(b));
        let (ka, kb) = (ra.rows(), rb.rows());
        let n = self.rank();
        let mut eqs = RatMatrix::zeros(n, ka + kb);
        for j in 0..n {
            for i in 0..ka {
                eqs.set(j, i, Rat::from_integer(ra.get(i, j).clone()));
            }
            for i in 0..kb {
                eqs.set(j, ka + i, Rat::from_integer(-rb.get(i, j)));
            }
        }
        let mut strict = RatMatrix::zeros(ka + kb, ka + kb);
        for i in 0..ka + kb {
            strict.set(i, i, Rat::one());
        }
        strict_lp_feasible(&eqs, &strict).0
    }
}
