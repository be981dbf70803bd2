use num_traits::{One, Zero};
use serde::Serialize;

use crate::fan::{ConewiseLinear, Fan};
use crate::zlinalg::lp::verify_strict_certificate;
use crate::zlinalg::rational::{int_to_rat, solve};
use crate::zlinalg::{minimize, strict_lp_feasible, Constraint, Minimum, Rat, RatMatrix, Relation};

#[derive(Clone, Debug, Serialize)]
pub struct ConeFeasibility {
    pub cone: Vec<usize>,
    pub feasible: bool,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmpleReport {
    pub ample: bool,
    pub cones: Vec<ConeFeasibility>,
}

/// Strict convexity of `f` around every cone: some `λ ∈ M_Q` agrees with `f`
/// on `σ` and lies strictly below it on every adjacent ray. Each cone is an
/// LP in `(λ, t)` homogenized by `t > 0`, and each answer carries a checked
/// certificate.
pub fn is_ample(fan: &Fan, f: &ConewiseLinear) -> AmpleReport {
    let n = fan.rank();
    let cones: Vec<ConeFeasibility> = (0..fan.num_cones())
        .map(|sigma| {
            let row = |ray: usize, sign: i64| {
                let mut r: Vec<Rat> = int_to_rat(fan.ray(ray)).into_iter().map(|x| x * Rat::from_integer(sign.into())).collect();
                r.push(-&f.values[ray] * Rat::from_integer(sign.into()));
                r
            };
            let eq_rows: Vec<Vec<Rat>> = fan.cone(sigma).iter().map(|&r| row(r, 1)).collect();
            let mut strict_rows: Vec<Vec<Rat>> = fan.adjacent_rays(sigma).into_iter().map(|r| row(r, -1)).collect();
            let mut t = vec![Rat::zero(); n + 1];
            t[n] = Rat::one();
            strict_rows.push(t);
            let eqs = RatMatrix::from_rows(&eq_rows, n + 1);
            let strict = RatMatrix::from_rows(&strict_rows, n + 1);
            let (feasible, cert) = strict_lp_feasible(&eqs, &strict);
            let certified = verify_strict_certificate(&eqs, &strict, feasible, &cert);
            ConeFeasibility { cone: fan.cone(sigma).to_vec(), feasible, certified }
        })
        .collect();
    AmpleReport { ample: cones.iter().all(|c| c.feasible), cones }
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumMinimum {
    pub cone: Vec<usize>,
    /// `None` when the stratum carries no effective balanced curve.
    pub minimum: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KleimanReport {
    pub positive: bool,
    pub strata: Vec<StratumMinimum>,
}

/// Positivity of `f` on effective tropical curves in every stratum: minimizes
/// `Σ_ζ w_ζ f^σ(e^σ_ζ)` over weights on the rays of `Σ^σ` that are
/// nonnegative, balanced and sum to one.
pub fn kleiman_check(fan: &Fan, f: &ConewiseLinear) -> KleimanReport {
    let n = fan.rank();
    let mut strata = Vec::new();
    let mut positive = true;
    for sigma in 0..fan.num_cones() {
        let rays = fan.cone(sigma);
        let lambda = if rays.is_empty() {
            vec![Rat::zero(); n]
        } else {
            let a = RatMatrix::from_rows(&rays.iter().map(|&r| int_to_rat(fan.ray(r))).collect::<Vec<_>>(), n);
            let b: Vec<Rat> = rays.iter().map(|&r| f.values[r].clone()).collect();
            solve(&a, &b).expect("simplicial cones have independent rays")
        };
        let star = fan.star_fan(sigma).expect("cone of the fan");
        let m = star.ray_map.len();
        if m == 0 {
            strata.push(StratumMinimum { cone: rays.to_vec(), minimum: None });
            continue;
        }
        let objective: Vec<Rat> = star
            .ray_map
            .iter()
            .zip(&star.multiplicities)
            .map(|(&z, mult)| {
                let lz: Rat = lambda.iter().zip(int_to_rat(fan.ray(z))).map(|(l, v)| l * v).sum();
                (&f.values[z] - lz) / Rat::from_integer(mult.clone())
            })
            .collect();
        let mut cs = Vec::new();
        for i in 0..m {
            let mut c = vec![Rat::zero(); m];
            c[i] = Rat::one();
            cs.push(Constraint::new(c, Relation::Ge, Rat::zero()));
        }
        for coord in 0..star.fan.rank() {
            let c = (0..m).map(|i| Rat::from_integer(star.fan.ray(i)[coord].clone())).collect();
            cs.push(Constraint::new(c, Relation::Eq, Rat::zero()));
        }
        cs.push(Constraint::new(vec![Rat::one(); m], Relation::Eq, Rat::one()));
        let minimum = match minimize(&objective, &cs) {
            Minimum::Infeasible(_) => None,
            Minimum::Unbounded => unreachable!("the normalized weight polytope is bounded"),
            Minimum::Optimum { value, .. } => Some(value),
        };
        if let Some(v) = &minimum {
            positive &= v > &Rat::zero();
        }
        strata.push(StratumMinimum { cone: rays.to_vec(), minimum: minimum.map(|v| v.to_string()) });
    }
    KleimanReport { positive, strata }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::zlinalg::rat;

    fn f(v: &[i64]) -> ConewiseLinear {
        ConewiseLinear::new(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn p2_examples() {
        let fan = fixtures::p2();
        for (values, expected) in [(&[0, 0, 1][..], true), (&[0, 0, 0], false), (&[0, 0, -1], false), (&[1, 1, 1], true)] {
            let a = is_ample(&fan, &f(values));
            assert_eq!(a.ample, expected, "{values:?}");
            assert!(a.cones.iter().all(|c| c.certified));
            assert_eq!(kleiman_check(&fan, &f(values)).positive, expected, "{values:?}");
        }
    }

    #[test]
    fn zero_function_has_zero_minimum() {
        let r = kleiman_check(&fixtures::p2(), &f(&[0, 0, 0]));
        assert_eq!(r.strata[0].minimum.as_deref(), Some("0"));
    }

    #[test]
    fn delta_examples() {
        let fan = fixtures::delta();
        assert!(is_ample(&fan, &f(&[1, 1, 1])).ample);
        let k = kleiman_check(&fan, &f(&[1, 1, 1]));
        assert!(k.positive);
        assert!(k.strata.iter().skip(1).all(|s| s.minimum.is_none()));
        assert!(!kleiman_check(&fan, &f(&[-1, 0, 0])).positive);
        assert!(!is_ample(&fan, &f(&[-1, 0, 0])).ample);
    }
}
