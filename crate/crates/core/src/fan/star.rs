use num_bigint::BigInt;

use super::{Fan, FanError, TropicalWeights};
use crate::zlinalg::IntMatrix;

/// The star fan `Σ^σ` in `N^σ`, with the data tying it back to `Σ`.
#[derive(Clone, Debug)]
pub struct StarFan {
    pub fan: Fan,
    /// Original cone index for every star cone.
    pub cone_map: Vec<usize>,
    /// Original ray index for every star ray.
    pub ray_map: Vec<usize>,
    /// Factor dividing each projected ray generator to make it primitive.
    pub multiplicities: Vec<BigInt>,
    /// The projection `N → N^σ` acting on row vectors.
    pub proj: IntMatrix,
}

impl StarFan {
    /// Star cone corresponding to an original cone containing `σ`.
    pub fn star_cone(&self, original: usize) -> Option<usize> {
        self.cone_map.iter().position(|&c| c == original)
    }

    /// Weights on the star facets induced from weights on `Σ`.
    pub fn induced_weights(&self, w: &TropicalWeights) -> TropicalWeights {
        let values = self.fan.maximal_cones().into_iter().filter_map(|c| w.get(self.cone_map[c]).map(|x| (c, x.clone()))).collect();
        TropicalWeights::from_map(values)
    }
}

impl Fan {
    pub fn star_fan(&self, sigma: usize) -> Result<StarFan, FanError> {
        if sigma >= self.num_cones() {
            return Err(FanError::NotACone(vec![sigma]));
        }
        let ray_map = self.adjacent_rays(sigma);
        let mut rays = Vec::new();
        let mut multiplicities = Vec::new();
        for &r in &ray_map {
            let (v, m) = self.primitive_image(sigma, r);
            rays.push(v);
            multiplicities.push(m);
        }
        let local = |r: usize| ray_map.iter().position(|&x| x == r).unwrap();
        let maximal: Vec<Vec<usize>> = self
            .maximal_over(sigma)
            .iter()
            .map(|&e| self.cone(e).iter().filter(|r| !self.cone(sigma).contains(r)).map(|&r| local(r)).collect())
            .collect();
        let fan = Fan::new(self.quotient_rank(sigma), rays, maximal)?;
        let cone_map = fan
            .cones()
            .iter()
            .map(|c| {
                let mut orig: Vec<usize> = c.iter().map(|&i| ray_map[i]).collect();
                orig.extend_from_slice(self.cone(sigma));
                self.cone_index(&orig).expect("star cone lifts to a cone")
            })
            .collect();
        Ok(StarFan { fan, cone_map, ray_map, multiplicities, proj: self.geometry(sigma).proj.clone() })
    }
}
