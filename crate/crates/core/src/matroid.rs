//! Matroids given by bases or generators, their lattices of flats, and Bergman fans.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;

use crate::fan::{Fan, TropicalWeights};

/// Ground sets are limited so that subsets fit in a bitmask and closure enumeration stays cheap.
pub const MAX_GROUND: usize = 16;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set of size {0} exceeds the supported maximum of {MAX_GROUND}")]
    TooLarge(usize),
    #[error("uniform matroid needs r <= n, got r = {r}, n = {n}")]
    UniformRank { n: usize, r: usize },
    #[error("edge {0:?} refers to a vertex outside 0..{1}")]
    Vertex((usize, usize), usize),
    #[error("element {0} outside the ground set")]
    Element(usize),
    #[error("no bases given")]
    NoBases,
    #[error("bases have different sizes")]
    BasisSizes,
    #[error("basis exchange fails for {0:?} and {1:?}")]
    Exchange(Vec<usize>, Vec<usize>),
    #[error("element {0} is a loop; the Bergman fan needs a loopless matroid")]
    Loop(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum RankOracle {
    Uniform(usize),
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    Bases(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    ground: usize,
    rank: usize,
    oracle: RankOracle,
}

/// A flat and its rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub elements: Vec<usize>,
    pub rank: usize,
}

fn mask(set: &[usize]) -> u32 {
    set.iter().fold(0, |m, &i| m | 1 << i)
}

fn elements(m: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| m >> i & 1 == 1).collect()
}

impl Matroid {
    pub fn uniform(n: usize, r: usize) -> Result<Matroid, MatroidError> {
        if n > MAX_GROUND {
            return Err(MatroidError::TooLarge(n));
        }
        if r > n {
            return Err(MatroidError::UniformRank { n, r });
        }
        Ok(Matroid { ground: n, rank: r, oracle: RankOracle::Uniform(r) })
    }

    /// The cycle matroid of a graph; edges are the ground set.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Result<Matroid, MatroidError> {
        if edges.len() > MAX_GROUND {
            return Err(MatroidError::TooLarge(edges.len()));
        }
        if let Some(&e) = edges.iter().find(|(a, b)| *a >= vertices || *b >= vertices) {
            return Err(MatroidError::Vertex(e, vertices));
        }
        let oracle = RankOracle::Graphic { vertices, edges: edges.to_vec() };
        let mut m = Matroid { ground: edges.len(), rank: 0, oracle };
        m.rank = m.rank_of(&(0..edges.len()).collect::<Vec<_>>());
        Ok(m)
    }

    /// A matroid from its list of bases; the exchange axiom is checked.
    pub fn from_bases(ground: usize, bases: &[Vec<usize>]) -> Result<Matroid, MatroidError> {
        if ground > MAX_GROUND {
            return Err(MatroidError::TooLarge(ground));
        }
        let first = bases.first().ok_or(MatroidError::NoBases)?;
        let rank = first.iter().collect::<BTreeSet<_>>().len();
        let mut masks = Vec::new();
        for b in bases {
            if let Some(&e) = b.iter().find(|&&e| e >= ground) {
                return Err(MatroidError::Element(e));
            }
            let m = mask(b);
            if m.count_ones() as usize != rank {
                return Err(MatroidError::BasisSizes);
            }
            masks.push(m);
        }
        masks.sort_unstable();
        masks.dedup();
        for &a in &masks {
            for &b in &masks {
                for x in elements(a & !b, ground) {
                    let ok = elements(b & !a, ground).iter().any(|&y| masks.binary_search(&(a & !(1 << x) | 1 << y)).is_ok());
                    if !ok {
                        return Err(MatroidError::Exchange(elements(a, ground), elements(b, ground)));
                    }
                }
            }
        }
        Ok(Matroid { ground, rank, oracle: RankOracle::Bases(masks) })
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_of(&self, set: &[usize]) -> usize {
        self.rank_mask(mask(set))
    }

    fn rank_mask(&self, m: u32) -> usize {
        match &self.oracle {
            RankOracle::Uniform(r) => (m.count_ones() as usize).min(*r),
            RankOracle::Bases(bases) => bases.iter().map(|b| (b & m).count_ones() as usize).max().unwrap_or(0),
            RankOracle::Graphic { vertices, edges } => {
                let mut parent: Vec<usize> = (0..*vertices).collect();
                fn find(p: &mut [usize], x: usize) -> usize {
                    let mut r = x;
                    while p[r] != r {
                        r = p[r];
                    }
                    p[x] = r;
                    r
                }
                let mut merged = 0;
                for (i, &(a, b)) in edges.iter().enumerate() {
                    if m >> i & 1 == 0 {
                        continue;
                    }
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                        merged += 1;
                    }
                }
                merged
            }
        }
    }

    fn closure_mask(&self, m: u32) -> u32 {
        let r = self.rank_mask(m);
        (0..self.ground).filter(|&i| m >> i & 1 == 1 || self.rank_mask(m | 1 << i) == r).fold(0, |acc, i| acc | 1 << i)
    }

    pub fn closure(&self, set: &[usize]) -> Vec<usize> {
        elements(self.closure_mask(mask(set)), self.ground)
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.ground).filter(|&i| self.rank_mask(1 << i) == 0).collect()
    }

    /// All flats, ordered by rank and then lexicographically.
    pub fn flats(&self) -> Vec<Flat> {
        let mut found: Vec<u32> = (0u32..1 << self.ground).map(|m| self.closure_mask(m)).collect();
        found.sort_unstable();
        found.dedup();
        let mut flats: Vec<Flat> =
            found.into_iter().map(|m| Flat { elements: elements(m, self.ground), rank: self.rank_mask(m) }).collect();
        flats.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.elements.cmp(&b.elements)));
        flats
    }

    /// The Bergman fan in `Z^n / Z(1,…,1)`, written in coordinates that drop
    /// the last ground element, together with its unit weights.
    pub fn bergman_fan(&self) -> Result<(Fan, TropicalWeights), MatroidError> {
        if let Some(&l) = self.loops().first() {
            return Err(MatroidError::Loop(l));
        }
        let n = self.ground;
        let dim = n.saturating_sub(1);
        let proper: Vec<Flat> = self.flats().into_iter().filter(|f| f.rank > 0 && f.rank < self.rank).collect();
        let rays: Vec<Vec<BigInt>> = proper
            .iter()
            .map(|f| {
                let last = f.elements.contains(&(n - 1));
                (0..dim).map(|i| BigInt::from(f.elements.contains(&i) as i64 - last as i64)).collect()
            })
            .collect();
        let masks: Vec<u32> = proper.iter().map(|f| mask(&f.elements)).collect();
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let top = self.rank.saturating_sub(1);
        if top > 0 {
            let mut stack: Vec<Vec<usize>> = (0..proper.len()).filter(|&i| proper[i].rank == 1).map(|i| vec![i]).collect();
            while let Some(chain) = stack.pop() {
                if chain.len() == top {
                    chains.push(chain);
                    continue;
                }
                let last = *chain.last().unwrap();
                for j in 0..proper.len() {
                    if proper[j].rank == proper[last].rank + 1 && masks[last] & !masks[j] == 0 {
                        let mut c = chain.clone();
                        c.push(j);
                        stack.push(c);
                    }
                }
            }
        }
        let chains: Vec<Vec<usize>> = chains.into_iter().map(|c| c.into_iter().sorted().collect()).sorted().collect();
        let fan = Fan::new(dim, rays, chains).expect("Bergman fan data is well formed");
        let weights = TropicalWeights::unit(&fan);
        Ok((fan, weights))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn flats_of_u23() {
        let m = Matroid::uniform(3, 2).unwrap();
        let f: Vec<Vec<usize>> = m.flats().into_iter().map(|f| f.elements).collect();
        assert_eq!(f, vec![vec![], vec![0], vec![1], vec![2], vec![0, 1, 2]]);
    }

    #[test]
    fn flats_of_u11() {
        let m = Matroid::uniform(1, 1).unwrap();
        assert_eq!(m.flats().len(), 2);
        let (fan, _) = m.bergman_fan().unwrap();
        assert_eq!(fan.rank(), 0);
        assert_eq!(fan.num_cones(), 1);
    }

    #[test]
    fn triangle_is_u23() {
        let t = Matroid::graphic(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(t.rank(), 2);
        assert_eq!(t.flats(), Matroid::uniform(3, 2).unwrap().flats());
    }

    #[test]
    fn bergman_u23() {
        let (fan, _) = Matroid::uniform(3, 2).unwrap().bergman_fan().unwrap();
        assert_eq!(fan.rays(), fixtures::u23().rays());
        assert_eq!(fan.cones(), fixtures::u23().cones());
    }

    #[test]
    fn bergman_k4() {
        let fan = fixtures::k4();
        assert_eq!(fan.num_rays(), 13);
        assert_eq!(fan.cones_of_dim(2).len(), 18);
        assert!(fan.is_pure());
        assert!(fan.is_unimodular());
        assert!(fan.is_saturated());
        assert!(fan.is_balanced(&TropicalWeights::unit(&fan)).unwrap());
    }

    #[test]
    fn bases_exchange() {
        let ok = Matroid::from_bases(3, &[vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        assert_eq!(ok.flats(), Matroid::uniform(3, 2).unwrap().flats());
        assert!(matches!(Matroid::from_bases(4, &[vec![0, 1], vec![2, 3]]), Err(MatroidError::Exchange(..))));
        assert_eq!(Matroid::from_bases(2, &[vec![0]]).unwrap().loops(), vec![1]);
        assert!(matches!(Matroid::from_bases(2, &[vec![0]]).unwrap().bergman_fan(), Err(MatroidError::Loop(1))));
    }
}
