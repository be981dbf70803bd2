//! Chow groups of simplicial fans through the localization presentation,
//! the ring structure, Minkowski weights and the comparison maps with the
//! tropical cohomology of `Σ̄`.

mod psi;
mod weights;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::fan::Fan;
use crate::homology::Coeff;
use crate::zlinalg::rational::{int_to_rat, rank_rat, rat_to_int, solve};
use crate::zlinalg::snf::solve_int_cols;
use crate::zlinalg::{AbGroup, IntMatrix, QuotientCoords, QuotientMap, Rat, RatMatrix};

pub use psi::{psi, psi_inverse, psi_inverse_ray};
pub use weights::{chow_mw_pairing, cycle_class, degree_map, minkowski_weights, CycleClass, MinkowskiWeight};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ChowError {
    #[error("integral Chow group of degree {0} needs a unimodular fan")]
    NotUnimodular(usize),
    #[error("degrees {0} and {1} do not match")]
    DegreeMismatch(usize, usize),
    #[error("class has non-integral coefficients")]
    NotIntegral,
    #[error("weights are not balanced")]
    Unbalanced,
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("cochain has bidegree ({0}, {1}); expected equal degrees")]
    Bidegree(usize, usize),
    #[error("the fan is not pure")]
    NotPure,
}

/// The matrix with rows `(m(e^τ_σ))_σ` for `τ ∈ Σ_{k−1}` and `m` running
/// over the coordinate functionals of `N^τ`; columns follow `Σ_k`.
///
/// Its rows generate the relations of `A^k`, and its kernel is `MW_k`.
pub fn balancing_matrix(fan: &Fan, k: usize) -> IntMatrix {
    let cols = fan.cones_of_dim(k);
    let Some(km1) = k.checked_sub(1) else {
        return IntMatrix::zeros(0, cols.len());
    };
    let mut rows = Vec::new();
    for &tau in fan.cones_of_dim(km1) {
        let m = fan.quotient_rank(tau);
        let mut block = vec![vec![BigInt::zero(); cols.len()]; m];
        for (j, &sigma) in cols.iter().enumerate() {
            if !fan.is_face(tau, sigma) {
                continue;
            }
            let (e, _) = fan.unit_normal(tau, sigma).expect("codimension-one face");
            for (i, x) in e.into_iter().enumerate() {
                block[i][j] = x;
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    }
    IntMatrix::from_rows(&rows, cols.len())
}

/// `A^k(Σ)` as the cokernel of [`balancing_matrix`] on the generators `x_σ`, `σ ∈ Σ_k`.
#[derive(Clone, Debug)]
pub struct ChowPresentation {
    pub degree: usize,
    pub coeff: Coeff,
    pub generators: Vec<usize>,
    pub relations: IntMatrix,
    pub group: AbGroup,
    quotient: QuotientMap,
}

/// An element of `A^k(Σ)` written on the generators `x_σ`, `σ ∈ Σ_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChowClass {
    pub degree: usize,
    #[serde(serialize_with = "serialize_rats")]
    pub coeffs: Vec<Rat>,
}

fn serialize_rats<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl ChowClass {
    pub fn zero(fan: &Fan, degree: usize) -> ChowClass {
        ChowClass { degree, coeffs: vec![Rat::zero(); fan.cones_of_dim(degree).len()] }
    }

    /// `x_σ`.
    pub fn generator(fan: &Fan, cone: usize) -> ChowClass {
        let degree = fan.cone_dim(cone);
        let mut c = ChowClass::zero(fan, degree);
        let j = fan.cones_of_dim(degree).iter().position(|&s| s == cone).unwrap();
        c.coeffs[j] = Rat::one();
        c
    }

    pub fn from_ints(degree: usize, coeffs: &[BigInt]) -> ChowClass {
        ChowClass { degree, coeffs: int_to_rat(coeffs) }
    }

    pub fn integral(&self) -> Option<Vec<BigInt>> {
        rat_to_int(&self.coeffs)
    }

    pub fn is_zero_vector(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &ChowClass) -> ChowClass {
        assert_eq!(self.degree, other.degree);
        ChowClass { degree: self.degree, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: &Rat) -> ChowClass {
        ChowClass { degree: self.degree, coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }
}

/// The presentation of `A^k(Σ)`.
///
/// In degrees `k ≤ 1` the presentation is the definition and holds for every
/// simplicial fan; in higher degrees integral coefficients need unimodularity.
pub fn chow_group(fan: &Fan, k: usize, coeff: Coeff) -> Result<ChowPresentation, ChowError> {
    if coeff == Coeff::Z && k >= 2 && !fan.is_unimodular() {
        return Err(ChowError::NotUnimodular(k));
    }
    let generators = fan.cones_of_dim(k).to_vec();
    let relations = balancing_matrix(fan, k);
    let quotient = QuotientMap::new(&relations);
    let group = match coeff {
        Coeff::Z => quotient.group(),
        Coeff::Q => quotient.group().rationalize(),
    };
    Ok(ChowPresentation { degree: k, coeff, generators, relations, group, quotient })
}

impl ChowPresentation {
    /// Coordinates of an integral class in `Z^r ⊕ ⊕ Z/d_i`.
    pub fn reduce(&self, class: &ChowClass) -> Result<QuotientCoords, ChowError> {
        if class.degree != self.degree {
            return Err(ChowError::DegreeMismatch(class.degree, self.degree));
        }
        let ints = class.integral().ok_or(ChowError::NotIntegral)?;
        Ok(self.quotient.coords(&ints))
    }

    /// Whether two classes agree modulo the relations (over `Q` in `Q` mode).
    pub fn equivalent(&self, a: &ChowClass, b: &ChowClass) -> Result<bool, ChowError> {
        if a.degree != self.degree || b.degree != self.degree {
            return Err(ChowError::DegreeMismatch(a.degree, b.degree));
        }
        let diff = a.add(&b.scale(&-Rat::one()));
        match self.coeff {
            Coeff::Z => Ok(self.reduce(&diff)?.is_zero()),
            Coeff::Q => Ok(in_row_span(&self.relations.to_rational(), &diff.coeffs)),
        }
    }

    /// Representatives of a basis of the free part.
    pub fn free_basis(&self) -> Vec<ChowClass> {
        self.quotient.free_generators().iter().map(|v| ChowClass::from_ints(self.degree, v)).collect()
    }

    /// Representatives of the cyclic torsion summands with their orders.
    pub fn torsion_basis(&self) -> Vec<(ChowClass, BigInt)> {
        self.quotient.torsion_generators().into_iter().map(|(v, d)| (ChowClass::from_ints(self.degree, &v), d)).collect()
    }
}

fn in_row_span(rows: &RatMatrix, v: &[Rat]) -> bool {
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    let stacked = rows.vstack(&RatMatrix::from_rows(&[v.to_vec()], v.len()));
    rank_rat(&stacked) == rank_rat(rows)
}

/// A linear form `m` with `m(v_ρ) = 1` and `m(v_ζ) = 0` for the other rays of the
/// cone, integral when the cone is unimodular.
fn dual_form(fan: &Fan, cone: usize, ray: usize) -> Vec<Rat> {
    let rays = fan.ray_matrix(cone);
    let target: Vec<BigInt> = fan.cone(cone).iter().map(|&r| BigInt::from(u8::from(r == ray))).collect();
    if let Some(m) = solve_int_cols(&rays, &target) {
        return int_to_rat(&m);
    }
    solve(&rays.to_rational(), &int_to_rat(&target)).expect("rays of a simplicial cone are independent")
}

/// `x_ρ · ξ`.
pub fn multiply_by_ray(fan: &Fan, ray: usize, class: &ChowClass) -> ChowClass {
    let k = class.degree;
    let mut out = ChowClass::zero(fan, k + 1);
    let targets = fan.cones_of_dim(k + 1);
    let slot = |c: usize| targets.iter().position(|&s| s == c).unwrap();
    for (&sigma, coeff) in fan.cones_of_dim(k).iter().zip(&class.coeffs) {
        if coeff.is_zero() {
            continue;
        }
        if !fan.cone(sigma).contains(&ray) {
            if let Some(joined) = fan.with_ray(sigma, ray) {
                out.coeffs[slot(joined)] += coeff;
            }
            continue;
        }
        let m = dual_form(fan, sigma, ray);
        for zeta in fan.adjacent_rays(sigma) {
            let value: Rat = fan.ray(zeta).iter().zip(&m).map(|(v, mi)| Rat::from_integer(v.clone()) * mi).sum();
            if value.is_zero() {
                continue;
            }
            let joined = fan.with_ray(sigma, zeta).unwrap();
            out.coeffs[slot(joined)] -= coeff * value;
        }
    }
    out
}

/// Product in `A^•(Σ)`; zero when the degree exceeds the dimension.
pub fn chow_multiply(fan: &Fan, a: &ChowClass, b: &ChowClass) -> ChowClass {
    let degree = a.degree + b.degree;
    let mut out = ChowClass::zero(fan, degree);
    if degree > fan.dim() {
        return out;
    }
    for (&sigma, coeff) in fan.cones_of_dim(a.degree).iter().zip(&a.coeffs) {
        if coeff.is_zero() {
            continue;
        }
        let mut term = b.clone();
        for &r in fan.cone(sigma) {
            term = multiply_by_ray(fan, r, &term);
        }
        out = out.add(&term.scale(coeff));
    }
    out
}
