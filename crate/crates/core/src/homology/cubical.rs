//! The cubical complex: one summand `SF^{p−q}(∞_σ)` per cone `σ ∈ Σ_q`.

use num_bigint::BigInt;

use super::{Coeff, Direction, GradedComplex, Layout};
use crate::exterior;
use crate::sheaf::Sheaf;
use crate::zlinalg::snf::gcd_vec;
use crate::zlinalg::IntMatrix;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CubicalError {
    #[error("integral cubical complex needs a unimodular fan")]
    NotUnimodular,
}

/// The cochain complex whose degree-`q` term is `⊕_{σ ∈ Σ_q} SF^{p−q}(∞_σ)`.
///
/// The component for `τ ⋖ σ` sends `a` to `c ↦ (−1)^{|τ|} a(e^τ_σ ∧ lift(c))`.
pub fn cubical_complex(sheaf: &Sheaf, p: usize, coeff: Coeff) -> Result<GradedComplex, CubicalError> {
    let fan = sheaf.fan();
    let comp = sheaf.comp();
    if coeff == Coeff::Z && !fan.is_unimodular() {
        return Err(CubicalError::NotUnimodular);
    }
    let top = p.min(fan.dim());
    let at_infinity = |c: usize| comp.face_index(c, c).unwrap();
    let layouts: Vec<Layout> = (0..=top)
        .map(|q| {
            let cones = fan.cones_of_dim(q).to_vec();
            let ranks = cones.iter().map(|&c| sheaf.rank(p - q, at_infinity(c))).collect();
            Layout::new(cones, ranks)
        })
        .collect();
    let mut maps = Vec::with_capacity(layouts.len());
    for q in 0..layouts.len() {
        let src = &layouts[q];
        let Some(dst) = layouts.get(q + 1) else {
            maps.push(IntMatrix::zeros(0, src.dim));
            break;
        };
        let k = p - q;
        let mut m = IntMatrix::zeros(dst.dim, src.dim);
        for &sigma in &dst.labels {
            let rows = dst.range(sigma).unwrap();
            for &r in fan.cone(sigma) {
                let tau = fan.without_ray(sigma, r);
                let cols = src.range(tau).unwrap();
                let sign = if fan.cone_dim(tau).is_multiple_of(2) { 1 } else { -1 };
                let e = fan.project(tau, fan.ray(r));
                let g = gcd_vec(&e);
                let e: Vec<BigInt> = e.iter().map(|x| x / &g).collect();
                let lift = fan.transition_lift(tau, sigma);
                let lift_k1 = exterior::exterior_power(&lift, k - 1);
                let source = sheaf.sf_lower(k - 1, at_infinity(sigma));
                let target = sheaf.sf_lower(k, at_infinity(tau));
                let m_tau = fan.quotient_rank(tau);
                for (j, row) in rows.clone().enumerate() {
                    let c = lift_k1.vec_mul(&source.basis.row_vec(j));
                    let w = exterior::wedge(m_tau, 1, &e, k - 1, &c);
                    let coords = target.coords(&w).expect("e ∧ lift(c) lies in SF at the smaller cone");
                    for (i, col) in cols.clone().enumerate() {
                        m.set(row, col, &coords[i] * sign);
                    }
                }
            }
        }
        maps.push(m);
    }
    Ok(GradedComplex::new(Direction::Cohomological, layouts, maps))
}
