//! Tropical (co)chain complexes of `Σ` and `Σ̄`, group extraction, and the
//! auxiliary complexes used as oracles.

mod cubical;
mod cup;
mod cycles;
mod double;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::compactify::CoverKind;
use crate::sheaf::Sheaf;
use crate::zlinalg::rational::rank_int;
use crate::zlinalg::{kernel_basis, snf, AbGroup, CoordBasis, IntMatrix, QuotientCoords, QuotientMap};

pub use cubical::{cubical_complex, CubicalError};
pub use cup::{cup, Cochain};
pub use cycles::{cap, cycle_class_chain, fundamental_cycle, CycleError};
pub use double::{fine_double_complex, DoubleComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coeff {
    Z,
    Q,
}

/// The space whose faces carry the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    /// The fan itself; only the origin is compact.
    Fan,
    /// The canonical compactification.
    Comp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Cohomology,
    Homology,
    BorelMoore,
    CompactSupport,
}

impl Variant {
    pub fn is_cohomological(self) -> bool {
        matches!(self, Variant::Cohomology | Variant::CompactSupport)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Differentials raise the degree.
    Cohomological,
    /// Differentials lower the degree.
    Homological,
}

/// The summands of one degree: a label per block with its rank and offset.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Layout {
    pub labels: Vec<usize>,
    pub ranks: Vec<usize>,
    pub offsets: Vec<usize>,
    pub dim: usize,
    position: HashMap<usize, usize>,
}

impl Layout {
    pub fn new(labels: Vec<usize>, ranks: Vec<usize>) -> Layout {
        let mut offsets = Vec::with_capacity(ranks.len());
        let mut dim = 0;
        for r in &ranks {
            offsets.push(dim);
            dim += r;
        }
        let position = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        Layout { labels, ranks, offsets, dim, position }
    }

    /// Block index of a label.
    pub fn block(&self, label: usize) -> Option<usize> {
        self.position.get(&label).copied()
    }

    /// Coordinate range of the block with the given label.
    pub fn range(&self, label: usize) -> Option<std::ops::Range<usize>> {
        self.block(label).map(|b| self.offsets[b]..self.offsets[b] + self.ranks[b])
    }
}

/// A finite complex of free abelian groups with explicit bases.
///
/// `maps[q]` is the differential leaving degree `q`, as a matrix acting on
/// column vectors; it has zero rows when the target degree is out of range.
#[derive(Clone, Debug)]
pub struct GradedComplex {
    pub direction: Direction,
    pub layouts: Vec<Layout>,
    pub maps: Vec<IntMatrix>,
}

impl GradedComplex {
    pub fn new(direction: Direction, layouts: Vec<Layout>, maps: Vec<IntMatrix>) -> GradedComplex {
        assert_eq!(layouts.len(), maps.len());
        GradedComplex { direction, layouts, maps }
    }

    /// Builds the complex from row-action boundary blocks `M_q : C_q → C_{q−1}`.
    /// `boundaries[q]` has `dim C_q` rows and `dim C_{q−1}` columns (`boundaries[0]` is empty).
    fn from_boundaries(direction: Direction, layouts: Vec<Layout>, boundaries: Vec<IntMatrix>) -> GradedComplex {
        let top = layouts.len();
        let mut maps = Vec::with_capacity(top);
        for q in 0..top {
            let m = match direction {
                Direction::Cohomological => match boundaries.get(q + 1) {
                    Some(b) => b.clone(),
                    None => IntMatrix::zeros(0, layouts[q].dim),
                },
                Direction::Homological => {
                    if q == 0 {
                        IntMatrix::zeros(0, layouts[0].dim)
                    } else {
                        boundaries[q].transpose()
                    }
                }
            };
            maps.push(m);
        }
        GradedComplex::new(direction, layouts, maps)
    }

    pub fn degrees(&self) -> usize {
        self.layouts.len()
    }

    pub fn dim(&self, q: usize) -> usize {
        self.layouts.get(q).map_or(0, |l| l.dim)
    }

    /// The differential leaving degree `q`.
    pub fn out_map(&self, q: usize) -> &IntMatrix {
        &self.maps[q]
    }

    /// The differential arriving in degree `q`, if any.
    pub fn in_map(&self, q: usize) -> Option<&IntMatrix> {
        match self.direction {
            Direction::Cohomological => q.checked_sub(1).map(|s| &self.maps[s]),
            Direction::Homological => self.maps.get(q + 1),
        }
    }

    /// Checks that consecutive differentials compose to zero.
    pub fn is_complex(&self) -> bool {
        (0..self.degrees()).all(|q| match self.in_map(q) {
            Some(i) => self.maps[q].mul(i).is_zero(),
            None => true,
        })
    }

    pub fn group(&self, q: usize, coeff: Coeff) -> AbGroup {
        if q >= self.degrees() {
            return AbGroup::trivial();
        }
        let out_rank = rank_of(self.out_map(q));
        let (in_rank, torsion) = match self.in_map(q) {
            Some(m) if !m.is_empty() => {
                let s = snf(m);
                (s.rank(), s.diag)
            }
            _ => (0, Vec::new()),
        };
        let free = self.dim(q) - out_rank - in_rank;
        match coeff {
            Coeff::Z => AbGroup::new(free, torsion),
            Coeff::Q => AbGroup::free(free),
        }
    }

    /// All groups; panics when the differentials do not square to zero.
    pub fn groups(&self, coeff: Coeff) -> Vec<AbGroup> {
        assert!(self.is_complex(), "differentials do not square to zero");
        (0..self.degrees()).map(|q| self.group(q, coeff)).collect()
    }

    /// Explicit coordinates on the (co)homology in degree `q`.
    pub fn class_map(&self, q: usize) -> ClassMap {
        let n = self.dim(q);
        let kernel = if self.out_map(q).rows() == 0 { IntMatrix::identity(n) } else { kernel_basis(self.out_map(q)) };
        let k = kernel.rows();
        let coords = (k > 0).then(|| CoordBasis::new(&kernel));
        let mut relations = Vec::new();
        if let (Some(m), Some(cb)) = (self.in_map(q), &coords) {
            for j in 0..m.cols() {
                let col = m.col_vec(j);
                relations.push(cb.lattice_coords(&col).expect("boundaries are cycles"));
            }
        }
        let relations = IntMatrix::from_rows(&relations, k);
        ClassMap { kernel, coords, quotient: QuotientMap::new(&relations), ambient: n }
    }
}

fn rank_of(m: &IntMatrix) -> usize {
    if m.is_empty() {
        0
    } else {
        rank_int(m)
    }
}

/// Cycles modulo boundaries in one degree, with explicit coordinates.
#[derive(Clone, Debug)]
pub struct ClassMap {
    kernel: IntMatrix,
    coords: Option<CoordBasis>,
    quotient: QuotientMap,
    ambient: usize,
}

impl ClassMap {
    pub fn group(&self) -> AbGroup {
        self.quotient.group()
    }

    /// Coordinates of the class of `x`; `None` when `x` is not a cycle.
    pub fn class(&self, x: &[num_bigint::BigInt]) -> Option<QuotientCoords> {
        assert_eq!(x.len(), self.ambient);
        let c = match &self.coords {
            None => {
                if x.iter().any(|v| v != &num_bigint::BigInt::from(0)) {
                    return None;
                }
                Vec::new()
            }
            Some(cb) => cb.lattice_coords(x)?,
        };
        Some(self.quotient.coords(&c))
    }

    pub fn is_cycle(&self, x: &[num_bigint::BigInt]) -> bool {
        self.class(x).is_some()
    }

    /// Cycle representatives of a basis of the free part.
    pub fn free_generators(&self) -> Vec<Vec<num_bigint::BigInt>> {
        self.quotient.free_generators().iter().map(|c| self.kernel.vec_mul(c)).collect()
    }

    /// Cycle representatives of the cyclic torsion summands, with their orders.
    pub fn torsion_generators(&self) -> Vec<(Vec<num_bigint::BigInt>, num_bigint::BigInt)> {
        self.quotient.torsion_generators().into_iter().map(|(c, d)| (self.kernel.vec_mul(&c), d)).collect()
    }
}

/// Tropical (co)chain complex of `X ∈ {Σ, Σ̄}` in the given variant.
pub fn build_complex(sheaf: &Sheaf, space: Space, p: usize, variant: Variant) -> GradedComplex {
    let comp = sheaf.comp();
    let direction = if variant.is_cohomological() { Direction::Cohomological } else { Direction::Homological };
    let (faces_by_dim, same_sed_only): (Vec<Vec<usize>>, bool) = match (space, variant) {
        (Space::Comp, _) => ((0..=comp.dim()).map(|q| comp.faces_of_dim(q).to_vec()).collect(), false),
        (Space::Fan, Variant::Cohomology | Variant::Homology) => (vec![vec![comp.face_index(0, 0).unwrap()]], true),
        (Space::Fan, _) => {
            ((0..=comp.dim()).map(|q| comp.faces_of_dim(q).iter().copied().filter(|&f| comp.is_finite(f)).collect()).collect(), true)
        }
    };
    let layouts: Vec<Layout> =
        faces_by_dim.iter().map(|fs| Layout::new(fs.clone(), fs.iter().map(|&f| sheaf.rank(p, f)).collect())).collect();
    let mut boundaries = vec![IntMatrix::zeros(layouts[0].dim, 0)];
    for q in 1..layouts.len() {
        let (src, dst) = (&layouts[q], &layouts[q - 1]);
        let mut m = IntMatrix::zeros(src.dim, dst.dim);
        for &upper in &src.labels {
            let rows = src.range(upper).unwrap();
            for cover in comp.covers_below(upper) {
                if same_sed_only && matches!(cover.kind, CoverKind::SedentarityDrop { .. }) {
                    continue;
                }
                let Some(cols) = dst.range(cover.lower) else { continue };
                let r = sheaf.restriction(p, cover.lower, upper);
                for (i, row) in rows.clone().enumerate() {
                    for (j, col) in cols.clone().enumerate() {
                        let v = r.get(i, j);
                        if cover.sign > 0 {
                            m.set(row, col, v.clone());
                        } else {
                            m.set(row, col, -v);
                        }
                    }
                }
            }
        }
        boundaries.push(m);
    }
    GradedComplex::from_boundaries(direction, layouts, boundaries)
}

/// The full `(p, q)` table of groups.
pub fn group_table(sheaf: &Sheaf, space: Space, variant: Variant, coeff: Coeff) -> Vec<Vec<AbGroup>> {
    let d = sheaf.fan().dim();
    (0..=d)
        .map(|p| {
            let c = build_complex(sheaf, space, p, variant);
            let g = c.groups(coeff);
            (0..=d).map(|q| g.get(q).cloned().unwrap_or_else(AbGroup::trivial)).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn parse(rows: &[&[&str]]) -> Vec<Vec<AbGroup>> {
        rows.iter().map(|r| r.iter().map(|s| s.parse().unwrap()).collect()).collect()
    }

    #[test]
    fn square_is_contractible() {
        let sh = Sheaf::new(&fixtures::cone2());
        let c = build_complex(&sh, Space::Comp, 0, Variant::Cohomology);
        let g = c.groups(Coeff::Z);
        assert_eq!(g, vec![AbGroup::free(1), AbGroup::trivial(), AbGroup::trivial()]);
    }

    #[test]
    fn compact_support_ranks_for_p2() {
        let sh = Sheaf::new(&fixtures::p2());
        let c = build_complex(&sh, Space::Fan, 0, Variant::CompactSupport);
        assert_eq!((0..3).map(|q| c.dim(q)).collect::<Vec<_>>(), vec![1, 3, 3]);
    }

    #[test]
    fn cube_table() {
        let sh = Sheaf::new(&fixtures::cube());
        let comp = group_table(&sh, Space::Comp, Variant::Cohomology, Coeff::Z);
        assert_eq!(comp, parse(&[&["Z", "0", "0"], &["0", "Z^5", "0"], &["0", "Z^2", "Z"]]));
        let fan = group_table(&sh, Space::Fan, Variant::CompactSupport, Coeff::Z);
        assert_eq!(fan, parse(&[&["0", "0", "Z^5"], &["0", "0", "Z^3 x Z/2Z"], &["0", "Z^2", "Z"]]));
    }

    #[test]
    fn sigma3_torsion() {
        let sh = Sheaf::new(&fixtures::sigma3());
        let c = build_complex(&sh, Space::Comp, 1, Variant::Cohomology);
        assert_eq!(c.groups(Coeff::Z)[2], "Z/3Z".parse().unwrap());
    }

    #[test]
    fn delta_h11() {
        let sh = Sheaf::new(&fixtures::delta());
        let c = build_complex(&sh, Space::Comp, 1, Variant::Cohomology);
        assert_eq!(c.groups(Coeff::Z)[1], AbGroup::free(1));
    }

    #[test]
    fn homology_is_transpose_of_cohomology() {
        for (_, fan) in fixtures::all() {
            let sh = Sheaf::new(&fan);
            for p in 0..=fan.dim() {
                let co = build_complex(&sh, Space::Comp, p, Variant::Cohomology);
                let ho = build_complex(&sh, Space::Comp, p, Variant::Homology);
                for q in 0..co.degrees() {
                    if q + 1 < co.degrees() {
                        assert_eq!(co.out_map(q).transpose(), *ho.out_map(q + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn cubical_matches_cellular() {
        for (name, fan) in fixtures::all() {
            let sh = Sheaf::new(&fan);
            let coeff = if fan.is_unimodular() { Coeff::Z } else { Coeff::Q };
            for p in 0..=fan.dim() {
                let cub = cubical_complex(&sh, p, coeff).unwrap();
                let cell = build_complex(&sh, Space::Comp, p, Variant::Cohomology).groups(coeff);
                let got = cub.groups(coeff);
                for q in 0..cell.len().max(got.len()) {
                    let a = got.get(q).cloned().unwrap_or_else(AbGroup::trivial);
                    let b = cell.get(q).cloned().unwrap_or_else(AbGroup::trivial);
                    assert_eq!(a, b, "{name} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn cubical_rejects_non_unimodular() {
        let sh = Sheaf::new(&fixtures::sigma3());
        assert_eq!(cubical_complex(&sh, 1, Coeff::Z).unwrap_err(), CubicalError::NotUnimodular);
    }

    #[test]
    fn double_complex_matches() {
        for (name, fan) in fixtures::all() {
            let sh = Sheaf::new(&fan);
            for p in 0..=fan.rank() {
                let dc = fine_double_complex(&sh, p).unwrap_or_else(|e| panic!("{name} p={p}: {e}"));
                let tot = dc.total().groups(Coeff::Z);
                let cell = build_complex(&sh, Space::Comp, p, Variant::Cohomology).groups(Coeff::Z);
                assert_eq!(tot, cell, "{name} p={p}");
            }
        }
    }
}
