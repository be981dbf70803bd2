//! The fine double complex: the cellular cochain complex of `Σ̄` split by
//! cone dimension (columns) and sedentarity dimension (rows).

use std::collections::BTreeMap;

use super::{build_complex, Direction, GradedComplex, Layout, Space, Variant};
use crate::compactify::CoverKind;
use crate::sheaf::Sheaf;
use crate::zlinalg::IntMatrix;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DoubleComplexError {
    #[error("horizontal differential does not square to zero at {0:?}")]
    Horizontal((usize, usize)),
    #[error("vertical differential does not square to zero at {0:?}")]
    Vertical((usize, usize)),
    #[error("differentials do not anticommute at {0:?}")]
    Anticommute((usize, usize)),
    #[error("total complex differs from the cellular complex in degree {0}")]
    Mismatch(usize),
}

/// Blocks indexed by `(a, t)` with `a = |σ|` and `t = |τ|`; the block sits at
/// bidegree `(a, −t)` and carries the faces `(τ, σ)` with those dimensions.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub p: usize,
    pub blocks: BTreeMap<(usize, usize), Layout>,
    /// `(a, t) → (a + 1, t)`, acting on columns.
    pub horizontal: BTreeMap<(usize, usize), IntMatrix>,
    /// `(a, t) → (a, t − 1)`, acting on columns.
    pub vertical: BTreeMap<(usize, usize), IntMatrix>,
}

impl DoubleComplex {
    fn zero_map(&self, from: (usize, usize), to: (usize, usize)) -> IntMatrix {
        let rows = self.blocks.get(&to).map_or(0, |l| l.dim);
        IntMatrix::zeros(rows, self.blocks[&from].dim)
    }

    fn h(&self, key: (usize, usize)) -> IntMatrix {
        self.horizontal.get(&key).cloned().unwrap_or_else(|| self.zero_map(key, (key.0 + 1, key.1)))
    }

    fn v(&self, key: (usize, usize)) -> IntMatrix {
        match key.1.checked_sub(1) {
            Some(t) => self.vertical.get(&key).cloned().unwrap_or_else(|| self.zero_map(key, (key.0, t))),
            None => IntMatrix::zeros(0, self.blocks[&key].dim),
        }
    }

    /// Rows and columns are complexes and the squares anticommute.
    pub fn check(&self) -> Result<(), DoubleComplexError> {
        for &key in self.blocks.keys() {
            let (a, t) = key;
            let right = (a + 1, t);
            if self.blocks.contains_key(&right) && !self.h(right).mul(&self.h(key)).is_zero() {
                return Err(DoubleComplexError::Horizontal(key));
            }
            if t >= 1 {
                let up = (a, t - 1);
                if self.blocks.contains_key(&up) && !self.v(up).mul(&self.v(key)).is_zero() {
                    return Err(DoubleComplexError::Vertical(key));
                }
                let diag = (a + 1, t - 1);
                if self.blocks.contains_key(&diag) && self.blocks.contains_key(&right) {
                    let hv = self.h(up).mul(&self.v(key));
                    let vh = self.v(right).mul(&self.h(key));
                    let sum = hv.add(&vh);
                    if !sum.is_zero() {
                        return Err(DoubleComplexError::Anticommute(key));
                    }
                }
            }
        }
        Ok(())
    }

    /// The total complex, with the faces of each degree ordered by block.
    pub fn total(&self) -> GradedComplex {
        let top = self.blocks.keys().map(|(a, t)| a - t).max().unwrap_or(0);
        let keys_of = |k: usize| -> Vec<(usize, usize)> { self.blocks.keys().copied().filter(|(a, t)| a - t == k).collect() };
        let layouts: Vec<Layout> = (0..=top)
            .map(|k| {
                let mut labels = Vec::new();
                let mut ranks = Vec::new();
                for key in keys_of(k) {
                    labels.extend(&self.blocks[&key].labels);
                    ranks.extend(&self.blocks[&key].ranks);
                }
                Layout::new(labels, ranks)
            })
            .collect();
        let mut maps = Vec::new();
        for k in 0..=top {
            let rows = if k < top { layouts[k + 1].dim } else { 0 };
            let mut m = IntMatrix::zeros(rows, layouts[k].dim);
            if k < top {
                let (mut col0, mut offsets) = (0, BTreeMap::new());
                for key in keys_of(k + 1) {
                    offsets.insert(key, col0);
                    col0 += self.blocks[&key].dim;
                }
                let mut col = 0;
                for key in keys_of(k) {
                    let (a, t) = key;
                    let mut place = |target: (usize, usize), block: IntMatrix| {
                        if let Some(&r0) = offsets.get(&target) {
                            for i in 0..block.rows() {
                                for j in 0..block.cols() {
                                    m.set(r0 + i, col + j, block.get(i, j).clone());
                                }
                            }
                        }
                    };
                    if self.blocks.contains_key(&(a + 1, t)) {
                        place((a + 1, t), self.h(key));
                    }
                    if t >= 1 && self.blocks.contains_key(&(a, t - 1)) {
                        place((a, t - 1), self.v(key));
                    }
                    col += self.blocks[&key].dim;
                }
            }
            maps.push(m);
        }
        GradedComplex::new(Direction::Cohomological, layouts, maps)
    }
}

/// Builds the double complex and checks that its total complex is the
/// cellular cochain complex of `Σ̄` up to reordering of the faces.
pub fn fine_double_complex(sheaf: &Sheaf, p: usize) -> Result<DoubleComplex, DoubleComplexError> {
    let comp = sheaf.comp();
    let fan = sheaf.fan();
    let key_of = |f: usize| {
        let face = comp.face(f);
        (fan.cone_dim(face.cone), fan.cone_dim(face.sed))
    };
    let mut grouped: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for f in 0..comp.num_faces() {
        grouped.entry(key_of(f)).or_default().push(f);
    }
    let blocks: BTreeMap<(usize, usize), Layout> = grouped
        .into_iter()
        .map(|(k, faces)| {
            let ranks = faces.iter().map(|&f| sheaf.rank(p, f)).collect();
            (k, Layout::new(faces, ranks))
        })
        .collect();
    let mut horizontal: BTreeMap<(usize, usize), IntMatrix> = BTreeMap::new();
    let mut vertical: BTreeMap<(usize, usize), IntMatrix> = BTreeMap::new();
    for cover in comp.covers() {
        let (from, to) = (key_of(cover.lower), key_of(cover.upper));
        let target = match cover.kind {
            CoverKind::SameSedentarity { .. } => &mut horizontal,
            CoverKind::SedentarityDrop { .. } => &mut vertical,
        };
        let m = target.entry(from).or_insert_with(|| IntMatrix::zeros(blocks[&to].dim, blocks[&from].dim));
        let rows = blocks[&to].range(cover.upper).unwrap();
        let cols = blocks[&from].range(cover.lower).unwrap();
        let r = sheaf.restriction(p, cover.lower, cover.upper);
        for (i, row) in rows.enumerate() {
            for (j, col) in cols.clone().enumerate() {
                m.set(row, col, r.get(i, j) * cover.sign);
            }
        }
    }
    let dc = DoubleComplex { p, blocks, horizontal, vertical };
    dc.check()?;
    let tot = dc.total();
    let cell = build_complex(sheaf, Space::Comp, p, Variant::Cohomology);
    for k in 0..tot.degrees().max(cell.degrees()) {
        if !same_up_to_reordering(&tot, &cell, k) {
            return Err(DoubleComplexError::Mismatch(k));
        }
    }
    Ok(dc)
}

/// Compares the differential leaving degree `k` block by block, matching blocks by label.
fn same_up_to_reordering(a: &GradedComplex, b: &GradedComplex, k: usize) -> bool {
    if a.dim(k) != b.dim(k) || a.dim(k + 1) != b.dim(k + 1) {
        return false;
    }
    if k + 1 >= a.degrees() || k + 1 >= b.degrees() {
        return true;
    }
    let (src_a, src_b) = (&a.layouts[k], &b.layouts[k]);
    let (dst_a, dst_b) = (&a.layouts[k + 1], &b.layouts[k + 1]);
    for &s in &src_a.labels {
        let (Some(ca), Some(cb)) = (src_a.range(s), src_b.range(s)) else { return false };
        for &t in &dst_a.labels {
            let (Some(ra), Some(rb)) = (dst_a.range(t), dst_b.range(t)) else { return false };
            for (ia, ib) in ra.clone().zip(rb.clone()) {
                for (ja, jb) in ca.clone().zip(cb.clone()) {
                    if a.maps[k].get(ia, ja) != b.maps[k].get(ib, jb) {
                        return false;
                    }
                }
            }
        }
    }
    true
}
