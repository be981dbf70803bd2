//! Cup product on the cellular cochains of `Σ̄`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::Layout;
use crate::compactify::orientation_value;
use crate::exterior;
use crate::sheaf::Sheaf;
use crate::zlinalg::rational::{int_to_rat, rat_to_int};
use crate::zlinalg::{IntMatrix, Rat};

/// A cochain in `C^{p,q}(Σ̄)`, in the coordinates of the cellular complex of
/// degree `p`: blocks follow the faces of dimension `q` in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub p: usize,
    pub q: usize,
    pub values: Vec<BigInt>,
}

impl Cochain {
    pub fn layout(sheaf: &Sheaf, p: usize, q: usize) -> Layout {
        let faces = sheaf.comp().faces_of_dim(q).to_vec();
        let ranks = faces.iter().map(|&f| sheaf.rank(p, f)).collect();
        Layout::new(faces, ranks)
    }

    pub fn zero(sheaf: &Sheaf, p: usize, q: usize) -> Cochain {
        Cochain { p, q, values: vec![BigInt::zero(); Cochain::layout(sheaf, p, q).dim] }
    }

    /// The constant cochain `1 ∈ C^{0,0}`.
    pub fn unit(sheaf: &Sheaf) -> Cochain {
        Cochain { p: 0, q: 0, values: vec![BigInt::from(1); sheaf.comp().faces_of_dim(0).len()] }
    }

    /// Values at one face, or `None` when the face has another dimension.
    pub fn at<'a>(&'a self, layout: &Layout, face: usize) -> Option<&'a [BigInt]> {
        layout.range(face).map(|r| &self.values[r])
    }
}

/// `a ⌣ b ∈ C^{p+p′, q+q′}`.
///
/// At `(τ, η)` the product sums, over `τ ≺ σ ≺ η` with `(τ, σ)` of dimension
/// `q`, the forms `a_{(τ,σ)} ∧ π^* b_{(σ,η)}` weighted by the sign comparing
/// the orientation of `(τ, η)` with that of `(τ, σ)` followed by `(σ, η)`.
pub fn cup(sheaf: &Sheaf, a: &Cochain, b: &Cochain) -> Cochain {
    let comp = sheaf.comp();
    let fan = sheaf.fan();
    let (p, q) = (a.p + b.p, a.q + b.q);
    let la = Cochain::layout(sheaf, a.p, a.q);
    let lb = Cochain::layout(sheaf, b.p, b.q);
    let out_layout = Cochain::layout(sheaf, p, q);
    assert_eq!(a.values.len(), la.dim);
    assert_eq!(b.values.len(), lb.dim);
    let mut out = vec![BigInt::zero(); out_layout.dim];
    if p > fan.rank() {
        return Cochain { p, q, values: out };
    }
    for &face in &out_layout.labels {
        let f = comp.face(face);
        let (tau, eta) = (f.sed, f.cone);
        let target = sheaf.sf_lower(p, face);
        if target.rank() == 0 {
            continue;
        }
        let m = fan.quotient_rank(tau);
        let mut total = vec![Rat::zero(); exterior::binomial(m, p)];
        let middle = fan.cones_of_dim(fan.cone_dim(tau) + a.q);
        for &sigma in middle.iter().filter(|&&s| fan.is_face(tau, s) && fan.is_face(s, eta)) {
            let left = comp.face_index(tau, sigma).unwrap();
            let right = comp.face_index(sigma, eta).unwrap();
            let alpha = sheaf.sf_lower(a.p, left).extend_functional(a.at(&la, left).unwrap());
            let beta = sheaf.sf_lower(b.p, right).extend_functional(b.at(&lb, right).unwrap());
            if alpha.iter().all(Zero::is_zero) || beta.iter().all(Zero::is_zero) {
                continue;
            }
            let pulled = exterior::exterior_power(&fan.transition(tau, sigma), b.p).to_rational().mul_vec(&beta);
            let product = exterior::wedge(m, a.p, &alpha, b.p, &pulled);
            let sign = orientation_sign(sheaf, tau, sigma, eta);
            for (t, x) in total.iter_mut().zip(product) {
                *t += x * Rat::from_integer(BigInt::from(sign));
            }
        }
        let values: Vec<Rat> = (0..target.rank()).map(|j| exterior::dot(&total, &int_to_rat(&target.basis.row_vec(j)))).collect();
        let values = rat_to_int(&values).expect("cup product of integral cochains is integral");
        out[out_layout.range(face).unwrap()].clone_from_slice(&values);
    }
    Cochain { p, q, values: out }
}

/// Sign of `ν_{(τ,σ)} ∧ lift(ν_{(σ,η)})` against `ν_{(τ,η)}`.
fn orientation_sign(sheaf: &Sheaf, tau: usize, sigma: usize, eta: usize) -> i32 {
    let comp = sheaf.comp();
    let fan = sheaf.fan();
    let whole = comp.tangent_lattice(comp.face_index(tau, eta).unwrap());
    let first = comp.tangent_lattice(comp.face_index(tau, sigma).unwrap());
    let second: IntMatrix = comp.tangent_lattice(comp.face_index(sigma, eta).unwrap()).mul(&fan.transition_lift(tau, sigma));
    let rows: Vec<Vec<BigInt>> = first.to_rows().into_iter().chain(second.to_rows()).collect();
    let v = orientation_value(whole, &rows);
    assert!(v.is_integer() && v.numer().magnitude() == &1u32.into(), "orientations differ by a unit");
    if v.is_positive() {
        1
    } else {
        -1
    }
}
