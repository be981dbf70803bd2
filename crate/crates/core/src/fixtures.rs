//! Small fans used throughout the tests, the acceptance suite and the CLI examples.

use crate::fan::Fan;
use crate::matroid::Matroid;

/// The fan of the projective plane.
pub fn p2() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap()
}

/// The fan of projective 3-space.
pub fn p3() -> Fan {
    Fan::from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]], &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]).unwrap()
}

/// Three rays spanning an index-3 sublattice, with no 2-cones: tropical and
/// unimodular but not saturated. Coordinates are in the basis `u₁ = e₁`,
/// `u₂ = (e₁ − e₂)/3` of the finer lattice.
pub fn delta() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[1, -3], &[-2, 3]], &[&[0], &[1], &[2]]).unwrap()
}

/// The complete fan on the rays of [`delta`]; every 2-cone has index 3.
pub fn sigma3() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[1, -3], &[-2, 3]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap()
}

/// The fan over the edges of the cube `[-1, 1]³`, in the lattice spanned by its rays.
pub fn cube() -> Fan {
    cube_ambient().rebased_to_ray_span()
}

/// The fan over the edges of the cube, with rays in `Z³`.
pub fn cube_ambient() -> Fan {
    let vertices: Vec<[i64; 3]> = (0..8).map(|i| [sign(i, 0), sign(i, 1), sign(i, 2)]).collect();
    let mut edges = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            let diff = (0..3).filter(|&k| vertices[a][k] != vertices[b][k]).count();
            if diff == 1 {
                edges.push(vec![a, b]);
            }
        }
    }
    let rays: Vec<&[i64]> = vertices.iter().map(|v| v.as_slice()).collect();
    let cones: Vec<&[usize]> = edges.iter().map(|e| e.as_slice()).collect();
    Fan::from_i64(3, &rays, &cones).unwrap()
}

fn sign(i: usize, bit: usize) -> i64 {
    if i >> bit & 1 == 1 {
        1
    } else {
        -1
    }
}

/// The Bergman fan of the uniform matroid `U_{2,3}`.
pub fn u23() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0], &[1], &[2]]).unwrap()
}

/// A single quadrant in `Z²` with its faces.
pub fn cone2() -> Fan {
    Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).unwrap()
}

/// The Bergman fan of `U_{2,4}`.
pub fn u24() -> Fan {
    Matroid::uniform(4, 2).unwrap().bergman_fan().unwrap().0
}

/// The Bergman fan of the cycle matroid of the complete graph on four vertices.
pub fn k4() -> Fan {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    Matroid::graphic(4, &edges).unwrap().bergman_fan().unwrap().0
}

/// All named fixtures with their names.
pub fn all() -> Vec<(&'static str, Fan)> {
    vec![
        ("p2", p2()),
        ("delta", delta()),
        ("sigma3", sigma3()),
        ("cube", cube()),
        ("u23", u23()),
        ("cone2", cone2()),
        ("p3", p3()),
        ("u24", u24()),
        ("k4", k4()),
    ]
}
