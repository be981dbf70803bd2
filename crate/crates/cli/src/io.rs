//! JSON input and output formats.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use tropfan_core::fan::{ConewiseLinear, Fan, FanError, TropicalWeights};
use tropfan_core::matroid::{Matroid, MatroidError};
use tropfan_core::zlinalg::Rat;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: {source}")]
    Fan { path: String, source: FanError },
    #[error("{path}: {source}")]
    Matroid { path: String, source: MatroidError },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeChoice {
    #[default]
    Ambient,
    RaySpan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub name: String,
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub lattice: LatticeChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_values: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub ray_values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MatroidFile {
    Uniform { n: usize, r: usize },
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    Bases { ground: usize, bases: Vec<Vec<usize>> },
}

/// A fan read from disk, with its weights and optional function.
pub struct LoadedFan {
    pub name: String,
    pub fan: Fan,
    pub weights: TropicalWeights,
    pub function: Option<ConewiseLinear>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Read { path: p.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| InputError::Json { path: p, source })
}

pub fn parse_values(path: &str, values: &[String], rays: usize) -> Result<ConewiseLinear, InputError> {
    if values.len() != rays {
        return Err(InputError::Invalid { path: path.into(), message: format!("ray_values has {} entries for {rays} rays", values.len()) });
    }
    let parsed = values
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.trim()
                .parse::<Rat>()
                .map_err(|_| InputError::Invalid { path: path.into(), message: format!("ray_values[{i}]: {s:?} is not a rational number") })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConewiseLinear::new(parsed))
}

impl FanFile {
    pub fn load(path: &Path) -> Result<LoadedFan, InputError> {
        let file: FanFile = read_json(path)?;
        file.build(&path.display().to_string())
    }

    pub fn build(&self, path: &str) -> Result<LoadedFan, InputError> {
        let fan_err = |source| InputError::Fan { path: path.into(), source };
        let rays = self.rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let mut fan = Fan::new(self.rank, rays, self.maximal_cones.clone()).map_err(fan_err)?;
        if !fan.validate(tropfan_core::fan::ValidationLevel::Combinatorial).is_simplicial() {
            return Err(InputError::Invalid { path: path.into(), message: "the fan is not simplicial".into() });
        }
        if self.lattice == LatticeChoice::RaySpan {
            fan = fan.rebased_to_ray_span();
        }
        let weights = match &self.weights {
            None => TropicalWeights::unit(&fan),
            Some(w) => {
                let w: Vec<BigInt> = w.iter().map(|&x| BigInt::from(x)).collect();
                let mut cones = self.maximal_cones.clone();
                cones.iter_mut().for_each(|c| c.sort_unstable());
                TropicalWeights::from_cones(&fan, &cones, &w).map_err(fan_err)?
            }
        };
        let function = match &self.ray_values {
            None => None,
            Some(v) => Some(parse_values(path, v, fan.num_rays())?),
        };
        Ok(LoadedFan { name: self.name.clone(), fan, weights, function })
    }

    pub fn from_fan(name: &str, fan: &Fan, weights: Option<&TropicalWeights>) -> FanFile {
        let small = |x: &BigInt| i64::try_from(x).expect("coordinates fit in 64 bits");
        let maximal = fan.maximal_cones();
        FanFile {
            name: name.into(),
            rank: fan.rank(),
            rays: fan.rays().iter().map(|r| r.iter().map(small).collect()).collect(),
            maximal_cones: maximal.iter().map(|&c| fan.cone(c).to_vec()).collect(),
            lattice: LatticeChoice::Ambient,
            weights: weights.map(|w| maximal.iter().map(|&c| small(&w.weight(c))).collect()),
            ray_values: None,
        }
    }
}

impl FunctionFile {
    pub fn load(path: &Path, rays: usize) -> Result<ConewiseLinear, InputError> {
        let file: FunctionFile = read_json(path)?;
        parse_values(&path.display().to_string(), &file.ray_values, rays)
    }
}

impl MatroidFile {
    pub fn load(path: &Path) -> Result<(String, Matroid), InputError> {
        let file: MatroidFile = read_json(path)?;
        let p = path.display().to_string();
        let (name, m) = match &file {
            MatroidFile::Uniform { n, r } => (format!("U_{r},{n}"), Matroid::uniform(*n, *r)),
            MatroidFile::Graphic { vertices, edges } => (format!("graphic_{vertices}_{}", edges.len()), Matroid::graphic(*vertices, edges)),
            MatroidFile::Bases { ground, bases } => (format!("bases_{ground}"), Matroid::from_bases(*ground, bases)),
        };
        m.map(|m| (name, m)).map_err(|source| InputError::Matroid { path: p, source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan_file_round_trip() {
        let f = tropfan_core::fixtures::p2();
        let file = FanFile::from_fan("p2", &f, Some(&TropicalWeights::unit(&f)));
        let text = serde_json::to_string(&file).unwrap();
        let back: FanFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        let loaded = back.build("p2").unwrap();
        assert_eq!(loaded.fan.num_cones(), 7);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        assert!(serde_json::from_str::<FanFile>(r#"{"name":"x","rank":1,"rays":[[1]],"maximal_cones":[[0]],"colour":1}"#).is_err());
        let file: FanFile =
            serde_json::from_str(r#"{"name":"x","rank":1,"rays":[[1]],"maximal_cones":[[0]],"ray_values":["1/0x"]}"#).unwrap();
        assert!(matches!(file.build("x"), Err(InputError::Invalid { .. })));
    }

    #[test]
    fn matroid_files() {
        let m: MatroidFile = serde_json::from_str(r#"{"type":"graphic","vertices":3,"edges":[[0,1],[1,2],[0,2]]}"#).unwrap();
        assert_eq!(m, MatroidFile::Graphic { vertices: 3, edges: vec![(0, 1), (1, 2), (0, 2)] });
    }
}
