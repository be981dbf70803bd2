//! Rational simplicial fans: storage, cone lattices, star fans, balancing
//! and the orientation conventions shared by the compactification code.

mod star;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::zlinalg::snf::{gcd_vec, saturate_rows, snf, solve_int_rows};
use crate::zlinalg::{CoordBasis, IntMatrix, Rat};

pub use star::StarFan;
pub use validate::{Diagnostics, ValidationLevel};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FanError {
    #[error("ray {ray} has {found} coordinates, expected {expected}")]
    RayDimension { ray: usize, expected: usize, found: usize },
    #[error("ray {0} is the zero vector")]
    ZeroRay(usize),
    #[error("cone {cone} refers to ray {index}, but there are only {rays} rays")]
    RayIndex { cone: usize, index: usize, rays: usize },
    #[error("cone {0} lists a ray twice")]
    RepeatedRay(usize),
    #[error("weights: {0}")]
    Weights(String),
    #[error("{0:?} is not a cone of the fan")]
    NotACone(Vec<usize>),
    #[error("cones {0:?} and {1:?} do not form a codimension-one pair")]
    NotCodimOne(Vec<usize>, Vec<usize>),
    #[error("the fan is not pure dimensional")]
    NotPure,
}

/// Lattice data of a single cone `σ`.
#[derive(Clone, Debug)]
pub struct ConeGeometry {
    /// Oriented basis of `N_σ` (rows); its wedge is the canonical multivector.
    pub basis: IntMatrix,
    /// `N → N^σ` acting on row vectors (`n × (n − k)`).
    pub proj: IntMatrix,
    /// A section of `proj`: `lift · proj = id`.
    pub lift: IntMatrix,
    /// Index of the lattice spanned by the rays inside `N_σ`.
    pub index: BigInt,
}

/// A simplicial fan in `Z^n` given by rays and maximal cones.
///
/// Cones are sorted ray-index lists ordered by dimension, then
/// lexicographically; cone `0` is the origin.
#[derive(Clone, Debug)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<BigInt>>,
    cones: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    maximal: Vec<bool>,
    by_dim: Vec<Vec<usize>>,
    geometry: Vec<OnceLock<ConeGeometry>>,
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<Vec<BigInt>>, maximal_cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(FanError::RayDimension { ray: i, expected: rank, found: r.len() });
            }
            if r.iter().all(|x| x.is_zero()) {
                return Err(FanError::ZeroRay(i));
            }
        }
        let mut all: Vec<Vec<usize>> = vec![Vec::new()];
        for (ci, c) in maximal_cones.iter().enumerate() {
            let mut s = c.clone();
            s.sort_unstable();
            if let Some(&bad) = s.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::RayIndex { cone: ci, index: bad, rays: rays.len() });
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(FanError::RepeatedRay(ci));
            }
            all.extend(s.iter().copied().powerset());
        }
        for i in 0..rays.len() {
            all.push(vec![i]);
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all.dedup();
        let index: HashMap<Vec<usize>, usize> = all.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let dim = all.last().map_or(0, |c| c.len());
        let mut by_dim = vec![Vec::new(); dim + 1];
        for (i, c) in all.iter().enumerate() {
            by_dim[c.len()].push(i);
        }
        let mut maximal = vec![true; all.len()];
        for c in &all {
            for f in c.iter().copied().combinations(c.len().saturating_sub(1)) {
                if f.len() + 1 == c.len() {
                    maximal[index[&f]] = false;
                }
            }
        }
        let geometry = (0..all.len()).map(|_| OnceLock::new()).collect();
        Ok(Fan { rank, rays, cones: all, index, maximal, by_dim, geometry })
    }

    pub fn from_i64(rank: usize, rays: &[&[i64]], maximal_cones: &[&[usize]]) -> Result<Fan, FanError> {
        Fan::new(
            rank,
            rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            maximal_cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    /// Re-expresses the rays in an HNF basis of the lattice they generate.
    pub fn rebased_to_ray_span(&self) -> Fan {
        let m = IntMatrix::from_rows(&self.rays, self.rank);
        let basis = if m.rows() == 0 { IntMatrix::zeros(0, self.rank) } else { crate::zlinalg::hnf(&m) };
        let cb = CoordBasis::new(&basis);
        let rays = self.rays.iter().map(|r| cb.lattice_coords(r).expect("ray lies in its own span")).collect();
        Fan::new(basis.rows(), rays, self.maximal_cones().iter().map(|&c| self.cones[c].clone()).collect())
            .expect("rebasing preserves structure")
    }

    /// The product fan in `N × N'`.
    pub fn product(&self, other: &Fan) -> Fan {
        let n = self.rank + other.rank;
        let mut rays = Vec::new();
        for r in &self.rays {
            let mut v = r.clone();
            v.extend(std::iter::repeat_n(BigInt::zero(), other.rank));
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![BigInt::zero(); self.rank];
            v.extend(r.iter().cloned());
            rays.push(v);
        }
        let shift = self.rays.len();
        let mut cones = Vec::new();
        for &a in &self.maximal_cones() {
            for &b in &other.maximal_cones() {
                let mut c = self.cones[a].clone();
                c.extend(other.cones[b].iter().map(|i| i + shift));
                cones.push(c);
            }
        }
        Fan::new(n, rays, cones).expect("product of valid fans")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[BigInt] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone(&self, c: usize) -> &[usize] {
        &self.cones[c]
    }

    pub fn cone_dim(&self, c: usize) -> usize {
        self.cones[c].len()
    }

    pub fn cone_index(&self, rays: &[usize]) -> Option<usize> {
        let mut s = rays.to_vec();
        s.sort_unstable();
        self.index.get(&s).copied()
    }

    /// Index of the cone spanned by a single ray.
    pub fn ray_cone(&self, ray: usize) -> usize {
        self.index[&vec![ray]]
    }

    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    /// Cones of dimension `k`, in the canonical order.
    pub fn cones_of_dim(&self, k: usize) -> &[usize] {
        self.by_dim.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn is_maximal(&self, c: usize) -> bool {
        self.maximal[c]
    }

    pub fn maximal_cones(&self) -> Vec<usize> {
        (0..self.cones.len()).filter(|&c| self.maximal[c]).collect()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.maximal_cones().iter().all(|&c| self.cones[c].len() == d)
    }

    pub fn is_face(&self, small: usize, big: usize) -> bool {
        let b = &self.cones[big];
        self.cones[small].iter().all(|r| b.binary_search(r).is_ok())
    }

    /// Cones containing `c` (including `c`), in canonical order.
    pub fn star_cones(&self, c: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&e| self.is_face(c, e)).collect()
    }

    /// Maximal cones containing `c`.
    pub fn maximal_over(&self, c: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&e| self.maximal[e] && self.is_face(c, e)).collect()
    }

    /// Faces of `c` (including `c` and the origin).
    pub fn faces(&self, c: usize) -> Vec<usize> {
        self.cones[c].iter().copied().powerset().map(|s| self.index[&s]).sorted().collect()
    }

    /// The cone spanned by the union of the rays of `a` and `b`, if any.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let mut s: Vec<usize> = self.cones[a].iter().chain(&self.cones[b]).copied().collect();
        s.sort_unstable();
        s.dedup();
        self.index.get(&s).copied()
    }

    /// The cone `c` with ray `r` added or removed.
    pub fn with_ray(&self, c: usize, r: usize) -> Option<usize> {
        let mut s = self.cones[c].clone();
        if s.contains(&r) {
            return Some(c);
        }
        s.push(r);
        s.sort_unstable();
        self.index.get(&s).copied()
    }

    pub fn without_ray(&self, c: usize, r: usize) -> usize {
        let s: Vec<usize> = self.cones[c].iter().copied().filter(|&x| x != r).collect();
        self.index[&s]
    }

    /// Ray cones `ρ ∉ c` such that `c ∨ ρ` exists.
    pub fn adjacent_rays(&self, c: usize) -> Vec<usize> {
        (0..self.rays.len()).filter(|r| !self.cones[c].contains(r) && self.with_ray(c, *r).is_some()).collect()
    }

    pub fn ray_matrix(&self, c: usize) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = self.cones[c].iter().map(|&r| self.rays[r].clone()).collect();
        IntMatrix::from_rows(&rows, self.rank)
    }

    pub fn geometry(&self, c: usize) -> &ConeGeometry {
        self.geometry[c].get_or_init(|| self.compute_geometry(c))
    }

    fn compute_geometry(&self, c: usize) -> ConeGeometry {
        let n = self.rank;
        let rm = self.ray_matrix(c);
        let k = rm.rows();
        let (mut basis, index) = if k == 0 { (IntMatrix::zeros(0, n), BigInt::one()) } else { saturate_rows(&rm) };
        assert_eq!(basis.rows(), k, "cone {:?} is not simplicial", self.cones[c]);
        if k > 0 {
            let cb = CoordBasis::new(&basis);
            let coords: Vec<Vec<Rat>> = rm.to_rows().iter().map(|r| cb.coords_int(r).unwrap()).collect();
            let cm = crate::zlinalg::RatMatrix::from_rows(&coords, k);
            let d = crate::zlinalg::rational::det_rat(&cm);
            if d.is_negative() {
                basis.negate_row(0);
            }
        }
        let s = snf(&basis);
        debug_assert!(s.diag.iter().all(|d| d.is_one()));
        let rest: Vec<usize> = (k..n).collect();
        let proj = s.v.select_cols(&rest);
        let lift = s.v_inv.select_rows(&rest);
        ConeGeometry { basis, proj, lift, index }
    }

    /// Rank of `N^σ = N / N_σ`.
    pub fn quotient_rank(&self, c: usize) -> usize {
        self.rank - self.cones[c].len()
    }

    /// Image of `v ∈ N` in `N^σ`.
    pub fn project(&self, c: usize, v: &[BigInt]) -> Vec<BigInt> {
        self.geometry(c).proj.vec_mul(v)
    }

    /// Matrix of the projection `N^τ → N^σ` for `τ ≺ σ`, acting on rows.
    pub fn transition(&self, tau: usize, sigma: usize) -> IntMatrix {
        debug_assert!(self.is_face(tau, sigma));
        self.geometry(tau).lift.mul(&self.geometry(sigma).proj)
    }

    /// Integral section of [`Fan::transition`]: maps `N^σ` into `N^τ`,
    /// sending each `N^σ_η` into `N^τ_η`.
    pub fn transition_lift(&self, tau: usize, sigma: usize) -> IntMatrix {
        self.geometry(sigma).lift.mul(&self.geometry(tau).proj)
    }

    /// Primitive image of ray `r` in `N^σ` and its multiplicity.
    pub fn primitive_image(&self, c: usize, r: usize) -> (Vec<BigInt>, BigInt) {
        let v = self.project(c, &self.rays[r]);
        let g = gcd_vec(&v);
        assert!(!g.is_zero(), "ray {r} lies in the span of cone {:?}", self.cones[c]);
        (v.iter().map(|x| x / &g).collect(), g)
    }

    /// Unit normal `e^τ_σ ∈ N^τ` for `τ ⋖ σ`, with a lift `n_{σ/τ} ∈ N_σ`.
    pub fn unit_normal(&self, tau: usize, sigma: usize) -> Result<(Vec<BigInt>, Vec<BigInt>), FanError> {
        let (t, s) = (&self.cones[tau], &self.cones[sigma]);
        if s.len() != t.len() + 1 || !self.is_face(tau, sigma) {
            return Err(FanError::NotCodimOne(t.clone(), s.clone()));
        }
        let r = *s.iter().find(|x| !t.contains(x)).unwrap();
        let (class, _) = self.primitive_image(tau, r);
        let g = self.geometry(sigma);
        let img = g.basis.mul(&self.geometry(tau).proj);
        let c = solve_int_rows(&img, &class).expect("unit normal lifts to N_σ");
        Ok((class, g.basis.vec_mul(&c)))
    }

    pub fn is_unimodular_cone(&self, c: usize) -> bool {
        self.geometry(c).index.is_one()
    }

    pub fn is_unimodular(&self) -> bool {
        self.maximal_cones().iter().all(|&c| self.is_unimodular_cone(c))
    }

    /// Whether the lattice generated by the support of the star fan at `c`
    /// is saturated in `N^c`.
    pub fn is_saturated_at(&self, c: usize) -> bool {
        let m = self.quotient_rank(c);
        let mut rows = Vec::new();
        for e in self.maximal_over(c) {
            let img = self.geometry(e).basis.mul(&self.geometry(c).proj);
            rows.extend(img.to_rows());
        }
        if rows.is_empty() {
            return true;
        }
        saturate_rows(&IntMatrix::from_rows(&rows, m)).1.is_one()
    }

    pub fn is_saturated(&self) -> bool {
        (0..self.cones.len()).all(|c| self.is_saturated_at(c))
    }

    /// For every codimension-one cone `τ`, the weighted sum of unit normals vanishes in `N^τ`.
    pub fn is_balanced(&self, w: &TropicalWeights) -> Result<bool, FanError> {
        if !self.is_pure() {
            return Err(FanError::NotPure);
        }
        let d = self.dim();
        if d == 0 {
            return Ok(true);
        }
        for &tau in self.cones_of_dim(d - 1) {
            let mut acc = vec![BigInt::zero(); self.quotient_rank(tau)];
            for &sigma in self.cones_of_dim(d) {
                if !self.is_face(tau, sigma) {
                    continue;
                }
                let (e, _) = self.unit_normal(tau, sigma)?;
                let wt = w.get(sigma).cloned().unwrap_or_default();
                for (a, x) in acc.iter_mut().zip(e) {
                    *a += &wt * x;
                }
            }
            if acc.iter().any(|x| !x.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Nonzero integer weights on the maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalWeights {
    values: BTreeMap<usize, BigInt>,
}

impl TropicalWeights {
    /// All facets weighted one.
    pub fn unit(fan: &Fan) -> Self {
        TropicalWeights { values: fan.maximal_cones().into_iter().map(|c| (c, BigInt::one())).collect() }
    }

    /// Weights listed in the order of `cones` (ray-index lists).
    pub fn from_cones(fan: &Fan, cones: &[Vec<usize>], weights: &[BigInt]) -> Result<Self, FanError> {
        if cones.len() != weights.len() {
            return Err(FanError::Weights(format!("{} weights for {} cones", weights.len(), cones.len())));
        }
        let mut values = BTreeMap::new();
        for (c, w) in cones.iter().zip(weights) {
            let idx = fan.cone_index(c).ok_or_else(|| FanError::NotACone(c.clone()))?;
            if !fan.is_maximal(idx) {
                return Err(FanError::Weights(format!("cone {c:?} is not maximal")));
            }
            if w.is_zero() {
                return Err(FanError::Weights(format!("zero weight on cone {c:?}")));
            }
            values.insert(idx, w.clone());
        }
        if values.len() != fan.maximal_cones().len() {
            return Err(FanError::Weights("every maximal cone needs exactly one weight".into()));
        }
        Ok(TropicalWeights { values })
    }

    pub fn from_map(values: BTreeMap<usize, BigInt>) -> Self {
        TropicalWeights { values }
    }

    pub fn get(&self, c: usize) -> Option<&BigInt> {
        self.values.get(&c)
    }

    pub fn weight(&self, c: usize) -> BigInt {
        self.values.get(&c).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.values.iter().map(|(k, v)| (*k, v))
    }

    pub fn negated(&self) -> Self {
        TropicalWeights { values: self.values.iter().map(|(k, v)| (*k, -v)).collect() }
    }

    pub fn scaled(&self, s: &BigInt) -> Self {
        TropicalWeights { values: self.values.iter().map(|(k, v)| (*k, v * s)).collect() }
    }
}

/// A conewise linear function, given by its rational values on ray generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConewiseLinear {
    pub values: Vec<Rat>,
}

impl ConewiseLinear {
    pub fn new(values: Vec<Rat>) -> Self {
        ConewiseLinear { values }
    }

    pub fn zero(fan: &Fan) -> Self {
        ConewiseLinear { values: vec![Rat::zero(); fan.num_rays()] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn cone_enumeration() {
        let p2 = fixtures::p2();
        assert_eq!(p2.num_cones(), 7);
        assert_eq!(p2.cones_of_dim(2).len(), 3);
        assert_eq!(p2.cone(0), &[] as &[usize]);
        assert!(p2.is_pure());
        assert_eq!(p2.maximal_cones().len(), 3);
    }

    #[test]
    fn unimodularity() {
        assert!(fixtures::p2().is_unimodular());
        assert!(!fixtures::sigma3().is_unimodular());
        assert!(fixtures::delta().is_unimodular());
        assert!(fixtures::cube().is_unimodular());
    }

    #[test]
    fn saturation() {
        assert!(!fixtures::delta().is_saturated_at(0));
        assert!(fixtures::p2().is_saturated_at(0));
        assert!(fixtures::cube().is_saturated());
    }

    #[test]
    fn balancing() {
        let delta = fixtures::delta();
        assert!(delta.is_balanced(&TropicalWeights::unit(&delta)).unwrap());
        let cube = fixtures::cube();
        assert!(cube.is_balanced(&TropicalWeights::unit(&cube)).unwrap());
        let cones: Vec<Vec<usize>> = vec![vec![0], vec![1], vec![2]];
        let w = TropicalWeights::from_cones(&delta, &cones, &v(&[1, 1, 2])).unwrap();
        assert!(!delta.is_balanced(&w).unwrap());
        assert!(delta.is_balanced(&TropicalWeights::unit(&delta).negated()).unwrap());
    }

    #[test]
    fn unit_normals() {
        let p2 = fixtures::p2();
        let r = p2.ray_cone(0);
        assert_eq!(p2.unit_normal(0, r).unwrap().0, v(&[1, 0]));

        let cone2 = fixtures::cone2();
        let t = cone2.ray_cone(0);
        let s = cone2.cone_index(&[0, 1]).unwrap();
        let (class, lift) = cone2.unit_normal(t, s).unwrap();
        assert_eq!(class.len(), 1);
        assert_eq!(cone2.project(t, &v(&[0, 1])), class);
        assert_eq!(cone2.project(t, &lift), class);

        let s3 = fixtures::sigma3();
        let t = s3.ray_cone(0);
        let s = s3.cone_index(&[0, 1]).unwrap();
        let (class, lift) = s3.unit_normal(t, s).unwrap();
        assert_eq!(lift[1], BigInt::from(-1));
        assert_eq!(s3.project(t, &v(&[0, -1])), class);
    }

    #[test]
    fn orientation_of_unimodular_cones_is_ray_wedge() {
        let p2 = fixtures::p2();
        for &c in p2.cones_of_dim(2) {
            let g = p2.geometry(c);
            let cb = CoordBasis::new(&g.basis);
            let coords: Vec<Vec<Rat>> = p2.ray_matrix(c).to_rows().iter().map(|r| cb.coords_int(r).unwrap()).collect();
            let m = crate::zlinalg::RatMatrix::from_rows(&coords, 2);
            assert_eq!(crate::zlinalg::rational::det_rat(&m), Rat::one());
        }
    }

    #[test]
    fn projections_have_sections() {
        let cube = fixtures::cube();
        for c in 0..cube.num_cones() {
            let g = cube.geometry(c);
            let k = cube.quotient_rank(c);
            assert_eq!(g.lift.mul(&g.proj), IntMatrix::identity(k));
            assert!(g.basis.mul(&g.proj).is_zero());
        }
    }
}
