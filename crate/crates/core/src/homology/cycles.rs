//! Fundamental cycles, cap products and cycle classes of weighted cones.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{build_complex, Space, Variant};
use crate::exterior;
use crate::fan::TropicalWeights;
use crate::sheaf::Sheaf;
use crate::zlinalg::rational::{int_to_rat, rat_to_int};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CycleError {
    #[error("weighted cones do not form a cycle")]
    NotACycle,
    #[error("weighted cones have different dimensions")]
    MixedDimension,
    #[error("cone {0} does not contain the sedentarity cone")]
    OutsideStar(usize),
    #[error("form degree {0} exceeds the fan dimension")]
    Degree(usize),
}

/// `Σ_η ω(η) ν_η` as a Borel–Moore chain in `C^{BM}_{d,d}(Σ)`.
pub fn fundamental_cycle(sheaf: &Sheaf, weights: &TropicalWeights) -> Result<Vec<BigInt>, CycleError> {
    cap(sheaf, 0, &[BigInt::from(1)], weights)
}

/// `α ∩ [Σ]` for `α ∈ SF^k(0̲)` given by its values on the basis of
/// `SF_k(0̲)`: the `(d−k, d)` Borel–Moore chain with coefficient
/// `κ_α(ω(η) ν_η)` at each facet `η`.
pub fn cap(sheaf: &Sheaf, k: usize, alpha: &[BigInt], weights: &TropicalWeights) -> Result<Vec<BigInt>, CycleError> {
    let fan = sheaf.fan();
    let comp = sheaf.comp();
    let d = fan.dim();
    if k > d {
        return Err(CycleError::Degree(k));
    }
    let n = fan.rank();
    let origin = comp.face_index(0, 0).unwrap();
    let alpha_hat = sheaf.sf_lower(k, origin).extend_functional(alpha);
    let cx = build_complex(sheaf, Space::Fan, d - k, Variant::BorelMoore);
    let layout = &cx.layouts[d];
    let mut chain = vec![BigInt::zero(); layout.dim];
    for &face in &layout.labels {
        let eta = comp.face(face).cone;
        let w = weights.weight(eta);
        if w.is_zero() {
            continue;
        }
        let nu = exterior::wedge_of_rows(comp.tangent_lattice(face));
        let contracted = exterior::contract_vector(n, k, &alpha_hat, d, &int_to_rat(&nu));
        let contracted = rat_to_int(&contracted).expect("contraction of an integral form is integral");
        let coords = sheaf.sf_lower(d - k, face).coords(&contracted).expect("contraction stays in the facet lattice");
        for (slot, c) in chain[layout.range(face).unwrap()].iter_mut().zip(coords) {
            *slot = c * &w;
        }
    }
    if k == 0 && !cx.out_map(d).mul_vec(&chain).iter().all(Zero::is_zero) {
        return Err(CycleError::NotACycle);
    }
    Ok(chain)
}

/// `Σ_η w(η) ν^σ_η` on the faces `(σ, η)`, as a chain in `C_{k,k}(Σ̄)` where
/// `k = dim η − dim σ`. Returns `k` and the chain.
pub fn cycle_class_chain(sheaf: &Sheaf, sed: usize, weights: &TropicalWeights) -> Result<(usize, Vec<BigInt>), CycleError> {
    let fan = sheaf.fan();
    let comp = sheaf.comp();
    let mut dims = weights.iter().filter(|(_, w)| !w.is_zero()).map(|(c, _)| fan.cone_dim(c));
    let top = dims.next().unwrap_or(fan.cone_dim(sed));
    if dims.any(|x| x != top) {
        return Err(CycleError::MixedDimension);
    }
    let k = top - fan.cone_dim(sed);
    let cx = build_complex(sheaf, Space::Comp, k, Variant::Homology);
    let layout = &cx.layouts[k];
    let mut chain = vec![BigInt::zero(); layout.dim];
    for (cone, w) in weights.iter().filter(|(_, w)| !w.is_zero()) {
        if !fan.is_face(sed, cone) {
            return Err(CycleError::OutsideStar(cone));
        }
        let face = comp.face_index(sed, cone).unwrap();
        let nu = exterior::wedge_of_rows(comp.tangent_lattice(face));
        let coords = sheaf.sf_lower(k, face).coords(&nu).expect("ν lies in SF_k");
        for (slot, c) in chain[layout.range(face).unwrap()].iter_mut().zip(coords) {
            *slot = c * w;
        }
    }
    if !cx.out_map(k).mul_vec(&chain).iter().all(Zero::is_zero) {
        return Err(CycleError::NotACycle);
    }
    Ok((k, chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn delta_fundamental_cycle() {
        let fan = fixtures::delta();
        let sh = Sheaf::new(&fan);
        let z = fundamental_cycle(&sh, &TropicalWeights::unit(&fan)).unwrap();
        assert_eq!(z.len(), 3);
        let cx = build_complex(&sh, Space::Fan, 1, Variant::BorelMoore);
        for r in 0..3 {
            let face = sh.comp().face_index(0, fan.ray_cone(r)).unwrap();
            let block = &z[cx.layouts[1].range(face).unwrap()];
            assert_eq!(sh.sf_lower(1, face).element(block), fan.ray(r));
        }
    }

    #[test]
    fn unbalanced_is_rejected() {
        let fan = fixtures::delta();
        let sh = Sheaf::new(&fan);
        let w = TropicalWeights::from_map(
            [(fan.ray_cone(0), BigInt::from(2))].into_iter().chain((1..3).map(|r| (fan.ray_cone(r), BigInt::from(1)))).collect(),
        );
        assert_eq!(fundamental_cycle(&sh, &w), Err(CycleError::NotACycle));
    }

    #[test]
    fn cap_with_unit_is_fundamental_cycle() {
        for (_, fan) in fixtures::all() {
            let sh = Sheaf::new(&fan);
            let w = TropicalWeights::unit(&fan);
            if let Ok(z) = fundamental_cycle(&sh, &w) {
                assert_eq!(cap(&sh, 0, &[BigInt::from(1)], &w).unwrap(), z);
            }
        }
    }

    #[test]
    fn cap_on_p2_is_a_cycle() {
        let fan = fixtures::p2();
        let sh = Sheaf::new(&fan);
        let w = TropicalWeights::unit(&fan);
        let chain = cap(&sh, 1, &[BigInt::from(1), BigInt::from(0)], &w).unwrap();
        let cx = build_complex(&sh, Space::Fan, 1, Variant::BorelMoore);
        assert!(cx.out_map(2).mul_vec(&chain).iter().all(Zero::is_zero));
        assert!(chain.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn fundamental_class_of_delta() {
        let fan = fixtures::delta();
        let sh = Sheaf::new(&fan);
        let (k, chain) = cycle_class_chain(&sh, 0, &TropicalWeights::unit(&fan)).unwrap();
        assert_eq!(k, 1);
        let cx = build_complex(&sh, Space::Comp, 1, Variant::Homology);
        let cm = cx.class_map(1);
        assert_eq!(cm.group(), crate::zlinalg::AbGroup::free(1));
        let class = cm.class(&chain).unwrap();
        assert_eq!(class.free.iter().map(|x| x.magnitude().clone()).collect::<Vec<_>>(), vec![1u32.into()]);
    }
}
