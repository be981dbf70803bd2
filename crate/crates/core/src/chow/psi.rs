//! The comparison `H^{p,p}(Σ̄) → A^p(Σ)` and explicit cocycles in the other direction.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ChowClass, ChowError};
use crate::exterior;
use crate::homology::{build_complex, cup, Cochain, Space, Variant};
use crate::sheaf::Sheaf;
use crate::zlinalg::rational::{int_to_rat, rat_to_int};
use crate::zlinalg::{solve_int_rows, IntMatrix, Rat};

fn is_cocycle(sheaf: &Sheaf, a: &Cochain) -> bool {
    let cx = build_complex(sheaf, Space::Comp, a.p, Variant::Cohomology);
    a.q + 1 >= cx.degrees() || cx.out_map(a.q).mul_vec(&a.values).iter().all(Zero::is_zero)
}

/// `a ↦ Σ_σ a_{(0̲,σ)}(ν_σ) x_σ` on cocycles of bidegree `(p, p)`.
pub fn psi(sheaf: &Sheaf, a: &Cochain) -> Result<ChowClass, ChowError> {
    if a.p != a.q {
        return Err(ChowError::Bidegree(a.p, a.q));
    }
    if !is_cocycle(sheaf, a) {
        return Err(ChowError::NotACocycle);
    }
    let comp = sheaf.comp();
    let fan = sheaf.fan();
    let layout = Cochain::layout(sheaf, a.p, a.q);
    let coeffs = fan
        .cones_of_dim(a.p)
        .iter()
        .map(|&sigma| {
            let face = comp.face_index(0, sigma).unwrap();
            let nu = exterior::wedge_of_rows(comp.tangent_lattice(face));
            let coords = sheaf.sf_lower(a.p, face).coords(&nu).expect("ν_σ lies in SF_p");
            let values = a.at(&layout, face).unwrap();
            Rat::from_integer(exterior::dot(&coords, values))
        })
        .collect();
    Ok(ChowClass { degree: a.p, coeffs })
}

/// A cocycle in `C^{1,1}(Σ̄)` mapping to `x_ρ`: one functional per face
/// `(σ, σ ∨ ρ)` taking the value one on the image of `e_ρ`, corrected on the
/// faces of positive sedentarity.
pub fn psi_inverse_ray(sheaf: &Sheaf, ray: usize) -> Result<Cochain, ChowError> {
    let fan = sheaf.fan();
    let comp = sheaf.comp();
    if !fan.is_unimodular() {
        return Err(ChowError::NotUnimodular(1));
    }
    let layout1 = Cochain::layout(sheaf, 1, 1);
    let mut a = Cochain::zero(sheaf, 1, 1);
    for sigma in 0..fan.num_cones() {
        if fan.cone(sigma).contains(&ray) {
            continue;
        }
        let Some(eta) = fan.with_ray(sigma, ray) else { continue };
        let face = comp.face_index(sigma, eta).unwrap();
        let (e, _) = fan.primitive_image(sigma, ray);
        let lattice = sheaf.sf_lower(1, face);
        let c = lattice.coords(&e).expect("e_ρ lies in SF_1");
        let column = IntMatrix::from_rows(&c.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>(), 1);
        let alpha = solve_int_rows(&column, &[BigInt::from(1)]).expect("e_ρ is primitive in SF_1");
        a.values[layout1.range(face).unwrap()].clone_from_slice(&alpha);
    }

    let cx = build_complex(sheaf, Space::Comp, 1, Variant::Cohomology);
    if cx.degrees() <= 2 {
        return Ok(a);
    }
    let da = cx.out_map(1).mul_vec(&a.values);
    let layout2 = &cx.layouts[2];
    let mut b = Cochain::zero(sheaf, 1, 1);
    for &upper in &layout2.labels {
        let f = comp.face(upper);
        let (tau, eta) = (f.sed, f.cone);
        if fan.cone(tau).contains(&ray) || !fan.cone(eta).contains(&ray) {
            continue;
        }
        let tau_rho = fan.with_ray(tau, ray).unwrap();
        let lower = comp.face_index(tau_rho, eta).unwrap();
        let values = &da[layout2.range(upper).unwrap()];
        let functional = sheaf.sf_lower(1, upper).extend_functional(values);
        let lift = fan.transition_lift(tau, tau_rho);
        let target = sheaf.sf_lower(1, lower);
        let pushed: Vec<Rat> =
            (0..target.rank()).map(|j| exterior::dot(&functional, &int_to_rat(&lift.vec_mul(&target.basis.row_vec(j))))).collect();
        let pushed = rat_to_int(&pushed).expect("pushforward of an integral form is integral");
        let sign = comp.face_sign(lower, upper).expect("sedentarity drop is a cover");
        for (slot, v) in b.values[layout1.range(lower).unwrap()].iter_mut().zip(pushed) {
            *slot += v * sign;
        }
    }
    let values: Vec<BigInt> = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
    let result = Cochain { p: 1, q: 1, values };
    assert!(is_cocycle(sheaf, &result), "corrected cochain is a cocycle");
    Ok(result)
}

/// A cocycle in `C^{p,p}(Σ̄)` mapping to `x_σ`: the cup product of the ray cocycles.
pub fn psi_inverse(sheaf: &Sheaf, cone: usize) -> Result<Cochain, ChowError> {
    let mut out = Cochain::unit(sheaf);
    for &r in sheaf.fan().cone(cone) {
        out = cup(sheaf, &out, &psi_inverse_ray(sheaf, r)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{chow_group, chow_multiply};
    use crate::fixtures;
    use crate::homology::Coeff;

    fn unimodular_fixtures() -> Vec<(&'static str, crate::fan::Fan)> {
        fixtures::all().into_iter().filter(|(_, f)| f.is_unimodular()).collect()
    }

    #[test]
    fn round_trip_on_generators() {
        for (name, fan) in unimodular_fixtures() {
            let sh = Sheaf::new(&fan);
            for k in 0..=fan.dim() {
                for &sigma in fan.cones_of_dim(k) {
                    let a = psi_inverse(&sh, sigma).unwrap();
                    assert_eq!(psi(&sh, &a).unwrap(), ChowClass::generator(&fan, sigma), "{name} {:?}", fan.cone(sigma));
                }
            }
        }
    }

    #[test]
    fn coboundaries_map_to_zero() {
        let fan = fixtures::p2();
        let sh = Sheaf::new(&fan);
        let cx = build_complex(&sh, Space::Comp, 1, Variant::Cohomology);
        let a1 = chow_group(&fan, 1, Coeff::Z).unwrap();
        for j in 0..cx.dim(0) {
            let mut e = vec![BigInt::zero(); cx.dim(0)];
            e[j] = BigInt::from(1);
            let d = Cochain { p: 1, q: 1, values: cx.out_map(0).mul_vec(&e) };
            assert!(a1.reduce(&psi(&sh, &d).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn cone2_ray_is_a_coboundary() {
        let fan = fixtures::cone2();
        let sh = Sheaf::new(&fan);
        let a = psi_inverse_ray(&sh, 0).unwrap();
        let cx = build_complex(&sh, Space::Comp, 1, Variant::Cohomology);
        assert!(cx.class_map(1).class(&a.values).unwrap().is_zero());
    }

    #[test]
    fn p2_top_cone_evaluates_to_one() {
        let fan = fixtures::p2();
        let sh = Sheaf::new(&fan);
        let sigma = fan.cone_index(&[1, 2]).unwrap();
        let a = psi_inverse(&sh, sigma).unwrap();
        let face = sh.comp().face_index(0, sigma).unwrap();
        let layout = Cochain::layout(&sh, 2, 2);
        let nu = exterior::wedge_of_rows(sh.comp().tangent_lattice(face));
        let coords = sh.sf_lower(2, face).coords(&nu).unwrap();
        assert_eq!(exterior::dot(&coords, a.at(&layout, face).unwrap()), BigInt::from(1));
    }

    #[test]
    fn ring_morphism() {
        for (name, fan) in unimodular_fixtures() {
            let sh = Sheaf::new(&fan);
            for &r in fan.cones_of_dim(1) {
                for &s in fan.cones_of_dim(1) {
                    if fan.dim() < 2 {
                        continue;
                    }
                    let a = psi_inverse(&sh, r).unwrap();
                    let b = psi_inverse(&sh, s).unwrap();
                    let lhs = psi(&sh, &cup(&sh, &a, &b)).unwrap();
                    let rhs = chow_multiply(&fan, &psi(&sh, &a).unwrap(), &psi(&sh, &b).unwrap());
                    let a2 = chow_group(&fan, 2, Coeff::Z).unwrap();
                    assert!(a2.equivalent(&lhs, &rhs).unwrap(), "{name}");
                }
            }
        }
    }
}
