//! Multi-tangent lattices `SF_p(δ) ⊆ ∧^p N^τ` on the faces of `Σ̄`, their
//! restriction maps, and contractions.
//!
//! `SF^p(δ)` is never stored separately: a cochain value at `δ` is the list of
//! its values on the HNF basis rows of `SF_p(δ)`.

use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::compactify::Compactification;
use crate::exterior::{self, binomial};
use crate::fan::Fan;
use crate::zlinalg::rational::{int_to_rat, rat_to_int, solve};
use crate::zlinalg::{hnf, CoordBasis, IntMatrix, Rat};

/// A basis of `SF_p(δ)` inside `∧^p N^τ` in the lexicographic monomial basis.
#[derive(Clone, Debug)]
pub struct CoefficientLattice {
    pub face: usize,
    pub degree: usize,
    /// Rank of `N^τ`.
    pub ambient: usize,
    /// HNF rows.
    pub basis: IntMatrix,
    coords: Option<CoordBasis>,
}

impl CoefficientLattice {
    fn new(face: usize, degree: usize, ambient: usize, gens: Vec<Vec<BigInt>>) -> Self {
        let width = binomial(ambient, degree);
        let basis = if gens.is_empty() { IntMatrix::zeros(0, width) } else { hnf(&IntMatrix::from_rows(&gens, width)) };
        let coords = (basis.rows() > 0).then(|| CoordBasis::new(&basis));
        CoefficientLattice { face, degree, ambient, basis, coords }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Integer coordinates of an element of `∧^p N^τ`, if it lies in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        match &self.coords {
            None => v.iter().all(|x| x == &BigInt::from(0)).then(Vec::new),
            Some(cb) => cb.lattice_coords(v),
        }
    }

    /// Rational coordinates of an element of the rational span.
    pub fn rational_coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        match &self.coords {
            None => v.iter().all(|x| x == &Rat::from_integer(BigInt::from(0))).then(Vec::new),
            Some(cb) => cb.coords(v),
        }
    }

    /// The element with the given coordinates, in the monomial basis.
    pub fn element(&self, coords: &[BigInt]) -> Vec<BigInt> {
        self.basis.vec_mul(coords)
    }

    /// Some rational functional on `∧^p N^τ` restricting to the given values on the basis rows.
    pub fn extend_functional(&self, values: &[BigInt]) -> Vec<Rat> {
        if self.rank() == 0 {
            return vec![Rat::from_integer(BigInt::from(0)); self.basis.cols()];
        }
        solve(&self.basis.to_rational(), &int_to_rat(values)).expect("basis rows are independent")
    }
}

/// The sheaf `SF_•` on the faces of `Σ̄`, computed lazily and cached.
#[derive(Debug)]
pub struct Sheaf {
    comp: Compactification,
    lattices: Vec<Vec<OnceLock<CoefficientLattice>>>,
}

impl Sheaf {
    pub fn new(fan: &Fan) -> Sheaf {
        Sheaf::from_compactification(Compactification::new(fan))
    }

    pub fn from_compactification(comp: Compactification) -> Sheaf {
        let n = comp.fan().rank();
        let lattices = (0..comp.num_faces()).map(|_| (0..=n).map(|_| OnceLock::new()).collect()).collect();
        Sheaf { comp, lattices }
    }

    pub fn comp(&self) -> &Compactification {
        &self.comp
    }

    pub fn fan(&self) -> &Fan {
        self.comp.fan()
    }

    /// `SF_p(δ)`; zero when `p` exceeds the rank of `N^τ`.
    pub fn sf_lower(&self, p: usize, face: usize) -> &CoefficientLattice {
        let n = self.fan().rank();
        if p > n {
            static EMPTY: OnceLock<CoefficientLattice> = OnceLock::new();
            return EMPTY.get_or_init(|| CoefficientLattice::new(usize::MAX, usize::MAX, 0, Vec::new()));
        }
        self.lattices[face][p].get_or_init(|| self.compute(p, face))
    }

    pub fn rank(&self, p: usize, face: usize) -> usize {
        self.sf_lower(p, face).rank()
    }

    fn compute(&self, p: usize, face: usize) -> CoefficientLattice {
        let fan = self.fan();
        let f = self.comp.face(face);
        let m = fan.quotient_rank(f.sed);
        let mut gens = Vec::new();
        for eta in fan.maximal_over(f.cone) {
            let t = self.comp.tangent_lattice(self.comp.face_index(f.sed, eta).unwrap());
            gens.extend(exterior::wedge_generators(t, p));
        }
        gens.retain(|g| g.iter().any(|x| x != &BigInt::from(0)));
        CoefficientLattice::new(face, p, m, gens)
    }

    /// Matrix (acting on coordinate rows) of `SF_p(δ) → SF_p(γ)` for `γ ≺ δ`.
    pub fn restriction(&self, p: usize, lower: usize, upper: usize) -> IntMatrix {
        assert!(self.comp.is_face_of(lower, upper), "faces {lower} and {upper} are not incident");
        let src = self.sf_lower(p, upper);
        let dst = self.sf_lower(p, lower);
        let (g, d) = (self.comp.face(lower), self.comp.face(upper));
        let mut out = IntMatrix::zeros(src.rank(), dst.rank());
        if src.rank() == 0 || dst.rank() == 0 {
            return out;
        }
        let push = (g.sed != d.sed).then(|| exterior::exterior_power(&self.fan().transition(d.sed, g.sed), p));
        for i in 0..src.rank() {
            let row = src.basis.row_vec(i);
            let image = match &push {
                Some(q) => q.vec_mul(&row),
                None => row,
            };
            let c = dst.coords(&image).expect("restriction lands in the target lattice");
            for (j, x) in c.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }

    /// `κ_ν(α)`: the functional `ν′ ↦ α(ν ∧ ν′)` on `SF_{p−k}(δ)`, for `α ∈ SF^p(δ)`
    /// given by its values and `ν ∈ SF_k(δ)` given by coordinates. Returns `None`
    /// when the values are not integral.
    pub fn contract(&self, face: usize, p: usize, alpha: &[BigInt], k: usize, nu: &[BigInt]) -> Option<Vec<BigInt>> {
        assert!(k <= p, "contraction degree exceeds form degree");
        let m = self.fan().quotient_rank(self.comp.face(face).sed);
        let alpha_hat = self.sf_lower(p, face).extend_functional(alpha);
        let nu_vec = int_to_rat(&self.sf_lower(k, face).element(nu));
        let reduced = exterior::contract(m, p, &alpha_hat, k, &nu_vec);
        let target = self.sf_lower(p - k, face);
        let values: Vec<Rat> = (0..target.rank()).map(|j| exterior::dot(&reduced, &int_to_rat(&target.basis.row_vec(j)))).collect();
        rat_to_int(&values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::zlinalg::Sublattice;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn delta_origin_is_not_saturated() {
        let sh = Sheaf::new(&fixtures::delta());
        let origin = sh.comp().face_index(0, 0).unwrap();
        let sf = sh.sf_lower(1, origin);
        assert_eq!(sf.basis, IntMatrix::from_i64(2, 2, &[1, 0, 0, 3]));
        assert_eq!(Sublattice::span(&sf.basis).saturate().1, BigInt::from(3));
    }

    #[test]
    fn degree_zero_and_top() {
        for (_, fan) in fixtures::all() {
            let sh = Sheaf::new(&fan);
            for f in 0..sh.comp().num_faces() {
                assert_eq!(sh.sf_lower(0, f).basis, IntMatrix::from_i64(1, 1, &[1]));
            }
        }
        let sh = Sheaf::new(&fixtures::p2());
        assert_eq!(sh.sf_lower(2, 0).basis, IntMatrix::from_i64(1, 1, &[1]));
    }

    #[test]
    fn restriction_examples() {
        let fan = fixtures::cone2();
        let sh = Sheaf::new(&fan);
        let top = fan.cone_index(&[0, 1]).unwrap();
        let rho = fan.ray_cone(0);
        let d = sh.comp().face_index(0, top).unwrap();
        let g = sh.comp().face_index(rho, top).unwrap();
        let r = sh.restriction(1, g, d);
        assert_eq!((r.rows(), r.cols()), (2, 1));
        assert_eq!(crate::zlinalg::rank(&r), 1);

        let delta = fixtures::delta();
        let sh = Sheaf::new(&delta);
        let rho = delta.ray_cone(0);
        let r = sh.restriction(1, sh.comp().face_index(rho, rho).unwrap(), sh.comp().face_index(0, rho).unwrap());
        assert_eq!((r.rows(), r.cols()), (1, 0));
    }

    #[test]
    fn restrictions_compose() {
        for (_, fan) in fixtures::all() {
            let sh = Sheaf::new(&fan);
            let c = sh.comp();
            for p in 0..=fan.rank() {
                for top in 0..c.num_faces() {
                    for c1 in c.covers_below(top) {
                        for c2 in c.covers_below(c1.lower) {
                            let direct = sh.restriction(p, c2.lower, top);
                            let composed = sh.restriction(p, c1.lower, top).mul(&sh.restriction(p, c2.lower, c1.lower));
                            assert_eq!(direct, composed);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn contraction_example() {
        let sh = Sheaf::new(&fixtures::p2());
        let got = sh.contract(0, 2, &b(&[1]), 1, &b(&[1, 0])).unwrap();
        assert_eq!(got, b(&[0, 1]));
        assert_eq!(sh.contract(0, 1, &b(&[3, 5]), 0, &b(&[1])).unwrap(), b(&[3, 5]));
        assert_eq!(sh.contract(0, 1, &b(&[3, 5]), 1, &b(&[0, 1])).unwrap(), b(&[5]));
    }
}
