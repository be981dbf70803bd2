//! The face poset of the canonical compactification `Σ̄`.
//!
//! A face is a pair `(τ, σ)` of cones with `τ ≺ σ`: the closure of the
//! projection of `σ` into the stratum at infinity of `τ`. All geometry lives
//! in the coordinates of `N^τ` provided by [`Fan::geometry`].

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::fan::Fan;
use crate::zlinalg::rational::det_rat;
use crate::zlinalg::snf::gcd_vec;
use crate::zlinalg::{hnf, CoordBasis, IntMatrix, Rat, RatMatrix};

/// A face `(τ, σ)` of `Σ̄`, as indices of cones of the fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompFace {
    pub sed: usize,
    pub cone: usize,
}

/// How a codimension-one face sits inside its cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverKind {
    /// `(τ, σ∖ρ) ⋖ (τ, σ)`.
    SameSedentarity { ray: usize },
    /// `(τ∪ρ, σ) ⋖ (τ, σ)`.
    SedentarityDrop { ray: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cover {
    /// The smaller face.
    pub lower: usize,
    /// The larger face.
    pub upper: usize,
    pub kind: CoverKind,
    pub sign: i32,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CompactifyError {
    #[error("faces {0} and {1} do not form a covering pair")]
    NotACover(usize, usize),
}

/// The faces of `Σ̄` with their tangent lattices and signed covering relations.
#[derive(Clone, Debug)]
pub struct Compactification {
    fan: Fan,
    faces: Vec<CompFace>,
    index: HashMap<CompFace, usize>,
    by_dim: Vec<Vec<usize>>,
    tangent: Vec<IntMatrix>,
    covers: Vec<Cover>,
    down: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
}

impl Compactification {
    pub fn new(fan: &Fan) -> Compactification {
        let fan = fan.clone();
        let mut faces = Vec::new();
        for sigma in 0..fan.num_cones() {
            for tau in fan.faces(sigma) {
                faces.push(CompFace { sed: tau, cone: sigma });
            }
        }
        let dim_of = |f: &CompFace| fan.cone_dim(f.cone) - fan.cone_dim(f.sed);
        faces.sort_by(|a, b| dim_of(a).cmp(&dim_of(b)).then_with(|| (a.sed, a.cone).cmp(&(b.sed, b.cone))));
        let index: HashMap<CompFace, usize> = faces.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut by_dim = vec![Vec::new(); fan.dim() + 1];
        for (i, f) in faces.iter().enumerate() {
            by_dim[dim_of(f)].push(i);
        }
        let tangent: Vec<IntMatrix> = faces.iter().map(|f| tangent_basis(&fan, f.sed, f.cone)).collect();
        let mut c = Compactification { fan, faces, index, by_dim, tangent, covers: Vec::new(), down: Vec::new(), up: Vec::new() };
        c.build_covers();
        c
    }

    fn build_covers(&mut self) {
        let n = self.faces.len();
        let mut down = vec![Vec::new(); n];
        let mut up = vec![Vec::new(); n];
        let mut covers = Vec::new();
        for d in 0..n {
            let CompFace { sed: tau, cone: sigma } = self.faces[d];
            let free: Vec<usize> = self.fan.cone(sigma).iter().copied().filter(|r| !self.fan.cone(tau).contains(r)).collect();
            for &r in &free {
                let same = CompFace { sed: tau, cone: self.fan.without_ray(sigma, r) };
                let kind = CoverKind::SameSedentarity { ray: r };
                let lower = self.index[&same];
                covers.push(Cover { lower, upper: d, kind, sign: self.compute_sign(lower, d, kind) });
            }
            for &r in &free {
                let drop = CompFace { sed: self.fan.with_ray(tau, r).unwrap(), cone: sigma };
                let kind = CoverKind::SedentarityDrop { ray: r };
                let lower = self.index[&drop];
                covers.push(Cover { lower, upper: d, kind, sign: self.compute_sign(lower, d, kind) });
            }
        }
        for (i, c) in covers.iter().enumerate() {
            down[c.upper].push(i);
            up[c.lower].push(i);
        }
        self.covers = covers;
        self.down = down;
        self.up = up;
    }

    fn compute_sign(&self, lower: usize, upper: usize, kind: CoverKind) -> i32 {
        let fan = &self.fan;
        let delta = self.faces[upper];
        let tau = delta.sed;
        let proj = &fan.geometry(tau).proj;
        let (ray, lower_rows) = match kind {
            CoverKind::SameSedentarity { ray } => (ray, self.tangent[lower].clone()),
            CoverKind::SedentarityDrop { ray } => {
                let lifted = self.tangent[lower].mul(&fan.transition_lift(tau, self.faces[lower].sed));
                (ray, lifted)
            }
        };
        let e = proj.vec_mul(fan.ray(ray));
        let g = gcd_vec(&e);
        let e: Vec<BigInt> = e.iter().map(|x| x / &g).collect();
        let mut rows = vec![e];
        rows.extend(lower_rows.to_rows());
        let value = orientation_value(&self.tangent[upper], &rows);
        debug_assert!(!value.is_zero());
        let s = if value.is_positive() { 1 } else { -1 };
        match kind {
            CoverKind::SameSedentarity { .. } => s,
            CoverKind::SedentarityDrop { .. } => -s,
        }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[CompFace] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> CompFace {
        self.faces[i]
    }

    pub fn face_index(&self, sed: usize, cone: usize) -> Option<usize> {
        self.index.get(&CompFace { sed, cone }).copied()
    }

    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn face_dim(&self, i: usize) -> usize {
        let f = self.faces[i];
        self.fan.cone_dim(f.cone) - self.fan.cone_dim(f.sed)
    }

    pub fn faces_of_dim(&self, q: usize) -> &[usize] {
        self.by_dim.get(q).map_or(&[], |v| v.as_slice())
    }

    /// Faces of sedentarity `0̲`, i.e. the cones of the fan itself.
    pub fn is_finite(&self, i: usize) -> bool {
        self.faces[i].sed == 0
    }

    /// Oriented basis (rows, in `N^τ` coordinates) of the tangent lattice of a face.
    pub fn tangent_lattice(&self, i: usize) -> &IntMatrix {
        &self.tangent[i]
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    /// Covers `γ ⋖ δ` with `δ = i`.
    pub fn covers_below(&self, i: usize) -> impl Iterator<Item = &Cover> + '_ {
        self.down[i].iter().map(|&c| &self.covers[c])
    }

    /// Covers `γ ⋖ δ` with `γ = i`.
    pub fn covers_above(&self, i: usize) -> impl Iterator<Item = &Cover> + '_ {
        self.up[i].iter().map(|&c| &self.covers[c])
    }

    pub fn face_sign(&self, lower: usize, upper: usize) -> Result<i32, CompactifyError> {
        self.covers_below(upper).find(|c| c.lower == lower).map(|c| c.sign).ok_or(CompactifyError::NotACover(lower, upper))
    }

    /// Whether `γ ≺ δ` (including equality) in the face poset.
    pub fn is_face_of(&self, lower: usize, upper: usize) -> bool {
        let (g, d) = (self.faces[lower], self.faces[upper]);
        self.fan.is_face(d.sed, g.sed) && self.fan.is_face(g.sed, g.cone) && self.fan.is_face(g.cone, d.cone)
    }
}

/// Basis of the image of `N_σ` in `N^τ`, oriented like the projected rays of `σ ∖ τ`.
fn tangent_basis(fan: &Fan, tau: usize, sigma: usize) -> IntMatrix {
    let m = fan.quotient_rank(tau);
    let k = fan.cone_dim(sigma) - fan.cone_dim(tau);
    if k == 0 {
        return IntMatrix::zeros(0, m);
    }
    let proj = &fan.geometry(tau).proj;
    let mut basis = hnf(&fan.geometry(sigma).basis.mul(proj));
    assert_eq!(basis.rows(), k);
    let rays: Vec<Vec<BigInt>> = fan.cone(sigma).iter().filter(|r| !fan.cone(tau).contains(r)).map(|&r| proj.vec_mul(fan.ray(r))).collect();
    if orientation_value(&basis, &rays).is_negative() {
        basis.negate_row(0);
    }
    basis
}

/// Determinant of the coordinates of `rows` in the basis `basis` (both spanning the same space).
pub fn orientation_value(basis: &IntMatrix, rows: &[Vec<BigInt>]) -> Rat {
    let k = basis.rows();
    assert_eq!(rows.len(), k);
    if k == 0 {
        return Rat::from_integer(BigInt::from(1));
    }
    let cb = CoordBasis::new(basis);
    let coords: Vec<Vec<Rat>> = rows.iter().map(|r| cb.coords_int(r).expect("vector in the tangent space")).collect();
    det_rat(&RatMatrix::from_rows(&coords, k))
}
