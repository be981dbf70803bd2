use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{balancing_matrix, ChowClass, ChowError};
use crate::fan::{Fan, TropicalWeights};
use crate::homology::{build_complex, cycle_class_chain, CycleError, Space, Variant};
use crate::sheaf::Sheaf;
use crate::zlinalg::{kernel_basis, QuotientCoords, Rat};

/// An integer weight on each cone of `Σ_p`, in the order of [`Fan::cones_of_dim`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinkowskiWeight {
    pub dim: usize,
    pub values: Vec<BigInt>,
}

impl MinkowskiWeight {
    pub fn is_balanced(&self, fan: &Fan) -> bool {
        balancing_matrix(fan, self.dim).mul_vec(&self.values).iter().all(Zero::is_zero)
    }

    /// The weight carried by the facets of a pure fan.
    pub fn from_tropical(fan: &Fan, w: &TropicalWeights) -> Result<MinkowskiWeight, ChowError> {
        if !fan.is_pure() {
            return Err(ChowError::NotPure);
        }
        let d = fan.dim();
        Ok(MinkowskiWeight { dim: d, values: fan.cones_of_dim(d).iter().map(|&c| w.weight(c)).collect() })
    }

    pub fn to_tropical(&self, fan: &Fan) -> TropicalWeights {
        let map: BTreeMap<usize, BigInt> =
            fan.cones_of_dim(self.dim).iter().zip(&self.values).filter(|(_, v)| !v.is_zero()).map(|(&c, v)| (c, v.clone())).collect();
        TropicalWeights::from_map(map)
    }
}

/// A basis of `MW_p(Σ)`: the integral kernel of the balancing conditions.
pub fn minkowski_weights(fan: &Fan, p: usize) -> Vec<MinkowskiWeight> {
    let m = balancing_matrix(fan, p);
    if m.cols() == 0 {
        return Vec::new();
    }
    let basis = if m.rows() == 0 { crate::zlinalg::IntMatrix::identity(m.cols()) } else { kernel_basis(&m) };
    basis.to_rows().into_iter().map(|values| MinkowskiWeight { dim: p, values }).collect()
}

/// `⟨ξ, w⟩ = Σ_σ ξ_σ w(σ)`.
pub fn chow_mw_pairing(xi: &ChowClass, w: &MinkowskiWeight) -> Result<Rat, ChowError> {
    if xi.degree != w.dim {
        return Err(ChowError::DegreeMismatch(xi.degree, w.dim));
    }
    Ok(xi.coeffs.iter().zip(&w.values).map(|(a, b)| a * Rat::from_integer(b.clone())).sum())
}

/// The degree of a top-dimensional class against the fundamental weight.
pub fn degree_map(fan: &Fan, omega: &TropicalWeights, xi: &ChowClass) -> Result<Rat, ChowError> {
    let w = MinkowskiWeight::from_tropical(fan, omega)?;
    if !w.is_balanced(fan) {
        return Err(ChowError::Unbalanced);
    }
    chow_mw_pairing(xi, &w)
}

/// The homology class of a Minkowski weight in `H_{p,p}(Σ̄)`.
#[derive(Clone, Debug)]
pub struct CycleClass {
    pub chain: Vec<BigInt>,
    pub class: QuotientCoords,
}

pub fn cycle_class(sheaf: &Sheaf, w: &MinkowskiWeight) -> Result<CycleClass, ChowError> {
    let fan = sheaf.fan();
    if !w.is_balanced(fan) {
        return Err(ChowError::Unbalanced);
    }
    let p = w.dim;
    let chain = if w.values.iter().all(Zero::is_zero) {
        vec![BigInt::zero(); build_complex(sheaf, Space::Comp, p, Variant::Homology).dim(p)]
    } else {
        match cycle_class_chain(sheaf, 0, &w.to_tropical(fan)) {
            Ok((_, chain)) => chain,
            Err(CycleError::NotACycle) => return Err(ChowError::Unbalanced),
            Err(e) => panic!("cycle class of a Minkowski weight: {e}"),
        }
    };
    let class = build_complex(sheaf, Space::Comp, p, Variant::Homology).class_map(p).class(&chain).expect("balanced weights give cycles");
    Ok(CycleClass { chain, class })
}
