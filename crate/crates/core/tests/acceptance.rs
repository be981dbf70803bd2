//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tropfan_core::chow::chow_group;
use tropfan_core::criteria::{
    chow_pd_check, comparison_report, cycle_class_matrix, homology_manifold_check, is_ample, kleiman_check, Comparison, Verdict,
};
use tropfan_core::fan::{ConewiseLinear, Fan, TropicalWeights};
use tropfan_core::fixtures;
use tropfan_core::homology::{build_complex, cubical_complex, fine_double_complex, group_table, Coeff, Space, Variant};
use tropfan_core::matroid::Matroid;
use tropfan_core::sheaf::Sheaf;
use tropfan_core::zlinalg::{AbGroup, Rat};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn parse(rows: &[&[&str]]) -> Vec<Vec<AbGroup>> {
    rows.iter().map(|r| r.iter().map(|s| s.parse().unwrap()).collect()).collect()
}

fn table_of_cube() -> Outcome {
    let start = Instant::now();
    let sh = Sheaf::new(&fixtures::cube());
    let compact = group_table(&sh, Space::Fan, Variant::CompactSupport, Coeff::Z);
    let closure = group_table(&sh, Space::Comp, Variant::Cohomology, Coeff::Z);
    let elapsed = start.elapsed();
    let want_compact = parse(&[&["0", "0", "Z^5"], &["0", "0", "Z^3 x Z/2Z"], &["0", "Z^2", "Z"]]);
    let want_closure = parse(&[&["Z", "0", "0"], &["0", "Z^5", "0"], &["0", "Z^2", "Z"]]);
    let mut matches = 0;
    for (got, want) in [(&compact, &want_compact), (&closure, &want_closure)] {
        for (g, w) in got.iter().flatten().zip(want.iter().flatten()) {
            matches += usize::from(g == w);
        }
    }
    check(matches == 18, format!("{matches}/18 entries match"))?;
    check(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    Ok(format!("18/18 entries, {elapsed:.2?}"))
}

fn delta_example() -> Outcome {
    let fan = fixtures::delta();
    let a1 = chow_group(&fan, 1, Coeff::Z).map_err(|e| e.to_string())?.group;
    check(a1 == "Z x Z/3Z".parse().unwrap(), format!("A^1 = {a1}"))?;
    let h11 = &group_table(&Sheaf::new(&fan), Space::Comp, Variant::Cohomology, Coeff::Z)[1][1];
    check(*h11 == AbGroup::free(1), format!("H^(1,1) = {h11}"))?;
    let report = comparison_report(&fan);
    let cmp = &report.degrees[1].comparison;
    check(*cmp == Comparison::SurjectiveTorsionKernel { kernel: "Z/3Z".into() }, format!("comparison {cmp:?}"))?;
    Ok(format!("A^1 = {a1}, H^(1,1) = {h11}, surjective with kernel Z/3Z"))
}

fn sigma3_example() -> Outcome {
    let fan = fixtures::sigma3();
    let h12 = &group_table(&Sheaf::new(&fan), Space::Comp, Variant::Cohomology, Coeff::Z)[1][2];
    check(*h12 == "Z/3Z".parse().unwrap(), format!("H^(1,2) = {h12}"))?;
    let a1 = chow_group(&fan, 1, Coeff::Z).map_err(|e| e.to_string())?.group;
    check(a1.torsion.iter().any(|d| (d % 3u32) == BigInt::from(0)), format!("A^1 = {a1}"))?;
    Ok(format!("H^(1,2) = {h12}, A^1 = {a1}"))
}

fn cubical_oracle() -> Outcome {
    let mut fans = fixtures::all();
    fans.push(("cube_ambient", fixtures::cube_ambient()));
    let mut cells = 0;
    for (name, fan) in fans {
        let sh = Sheaf::new(&fan);
        let coeff = if fan.is_unimodular() { Coeff::Z } else { Coeff::Q };
        for p in 0..=fan.dim() {
            let cub = cubical_complex(&sh, p, coeff).map_err(|e| format!("{name}: {e}"))?.groups(coeff);
            let cell = build_complex(&sh, Space::Comp, p, Variant::Cohomology).groups(coeff);
            for q in 0..cell.len().max(cub.len()) {
                let a = cub.get(q).cloned().unwrap_or_else(AbGroup::trivial);
                let b = cell.get(q).cloned().unwrap_or_else(AbGroup::trivial);
                check(a == b, format!("{name} ({p},{q}): cubical {a}, cellular {b}"))?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} groups agree (Z on unimodular fans, Q otherwise)"))
}

fn comparison_suite() -> Outcome {
    let fans = [
        ("cube", fixtures::cube()),
        ("u23", fixtures::u23()),
        ("p2", fixtures::p2()),
        ("cone2", fixtures::cone2()),
        ("u24", fixtures::u24()),
        ("k4", fixtures::k4()),
    ];
    let mut rings = 0;
    for (name, fan) in fans {
        let r = comparison_report(&fan);
        check(r.vanishing_holds(), format!("{name}: vanishing fails"))?;
        check(r.all_isomorphisms(), format!("{name}: {:?}", r.degrees.iter().map(|d| &d.comparison).collect::<Vec<_>>()))?;
        check(r.ring_morphism_holds(), format!("{name}: ring failures {:?}", r.ring_failures))?;
        check(r.round_trip_failures.is_empty(), format!("{name}: round trips {:?}", r.round_trip_failures))?;
        rings += r.ring_checks;
    }
    Ok(format!("6 fans, {rings} ring products"))
}

fn bergman_fans() -> Vec<(String, Fan, TropicalWeights)> {
    let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let matroids = [
        ("U_2,3", Matroid::uniform(3, 2)),
        ("U_2,4", Matroid::uniform(4, 2)),
        ("U_3,4", Matroid::uniform(4, 3)),
        ("U_2,5", Matroid::uniform(5, 2)),
        ("K_4", Matroid::graphic(4, &k4)),
    ];
    matroids
        .into_iter()
        .map(|(name, m)| {
            let (fan, w) = m.unwrap().bergman_fan().unwrap();
            (name.to_string(), fan, w)
        })
        .collect()
}

fn manifold_suite() -> Outcome {
    let fans = bergman_fans();
    for (name, fan, w) in &fans {
        let m = homology_manifold_check(fan, w, Coeff::Z);
        check(m.verdict == Verdict::True, format!("{name}: manifold check {:?}", m.verdict))?;
        let pd = chow_pd_check(fan, w, Coeff::Z);
        check(pd.verdict == Verdict::True, format!("{name}: {:?}", pd.witness))?;
        let d = fan.dim();
        for k in 0..=d {
            let a = chow_group(fan, k, Coeff::Z).map_err(|e| e.to_string())?.group;
            check(a.is_free(), format!("{name}: A^{k} = {a}"))?;
        }
        let top = chow_group(fan, d, Coeff::Z).unwrap().group;
        check(top == AbGroup::free(1), format!("{name}: A^{d} = {top}"))?;
        check(pd.gram.iter().all(|g| g.det == "1" || g.det == "-1"), format!("{name}: gram {:?}", pd.gram))?;
    }
    let cube = fixtures::cube();
    let w = TropicalWeights::unit(&cube);
    let pd = chow_pd_check(&cube, &w, Coeff::Z);
    check(pd.verdict == Verdict::False, "cube passes Poincaré duality")?;
    check(pd.gram.iter().any(|g| g.det == "2" || g.det == "-2"), format!("cube gram {:?}", pd.gram))?;
    check(homology_manifold_check(&cube, &w, Coeff::Z).verdict == Verdict::False, "cube passes the manifold check")?;
    Ok(format!("{} Bergman fans are manifolds; cube fails with {}", fans.len(), pd.witness.unwrap_or_default()))
}

fn cycle_class_suite() -> Outcome {
    let mut maps = 0;
    for (name, fan) in fixtures::all().into_iter().filter(|(_, f)| f.is_unimodular()) {
        let sh = Sheaf::new(&fan);
        for p in 0..=fan.dim() {
            let m = cycle_class_matrix(&sh, p);
            check(m.is_bijection(), format!("{name} p={p}: group {}, matrix {:?}", m.group, m.matrix))?;
            maps += 1;
        }
    }
    Ok(format!("{maps} cycle class maps have Smith form the identity"))
}

fn random_rat(rng: &mut StdRng) -> Rat {
    Rat::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=4)))
}

/// A linear function on the rays plus, for one-dimensional fans whose rays sum
/// to zero, a perturbation keeping the sum of values zero. Convex and nowhere
/// strictly convex at the origin.
fn boundary_function(fan: &Fan, rng: &mut StdRng) -> ConewiseLinear {
    let lambda: Vec<Rat> = (0..fan.rank()).map(|_| random_rat(rng)).collect();
    let mut values: Vec<Rat> =
        fan.rays().iter().map(|r| r.iter().zip(&lambda).map(|(x, l)| Rat::from_integer(x.clone()) * l).sum()).collect();
    if fan.dim() == 1 {
        let shift = random_rat(rng);
        values[0] += &shift;
        values[1] -= &shift;
    }
    ConewiseLinear::new(values)
}

fn kleiman_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut summary = Vec::new();
    for (name, fan) in [("p2", fixtures::p2()), ("delta", fixtures::delta()), ("u23", fixtures::u23())] {
        let mut ample = 0;
        for _ in 0..200 {
            let f = ConewiseLinear::new((0..fan.num_rays()).map(|_| random_rat(&mut rng)).collect());
            let lp = is_ample(&fan, &f);
            check(lp.cones.iter().all(|c| c.certified), format!("{name}: uncertified LP answer"))?;
            check(lp.ample == kleiman_check(&fan, &f).positive, format!("{name}: disagree on {:?}", f.values))?;
            ample += usize::from(lp.ample);
        }
        for _ in 0..20 {
            let f = boundary_function(&fan, &mut rng);
            let lp = is_ample(&fan, &f).ample;
            let kl = kleiman_check(&fan, &f).positive;
            check(!lp && !kl, format!("{name}: boundary case {:?} gives {lp}/{kl}", f.values))?;
        }
        check(ample > 0 && ample < 200, format!("{name}: {ample}/200 ample, the battery is degenerate"))?;
        summary.push(format!("{name} {ample}/200 ample"));
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("{}; 20 boundary cases each; {elapsed:.2?}", summary.join(", ")))
}

fn structural_suite() -> Outcome {
    let mut complexes = 0;
    for (name, fan) in fixtures::all() {
        let sh = Sheaf::new(&fan);
        for p in 0..=fan.dim() {
            for space in [Space::Fan, Space::Comp] {
                for variant in [Variant::Cohomology, Variant::Homology, Variant::BorelMoore, Variant::CompactSupport] {
                    check(build_complex(&sh, space, p, variant).is_complex(), format!("{name} {space:?} {variant:?} p={p}"))?;
                    complexes += 1;
                }
            }
            let dc = fine_double_complex(&sh, p).map_err(|e| format!("{name} p={p}: {e}"))?;
            dc.check().map_err(|e| format!("{name} p={p}: {e}"))?;
            let total = dc.total().groups(Coeff::Z);
            let cell = build_complex(&sh, Space::Comp, p, Variant::Cohomology).groups(Coeff::Z);
            check(total == cell, format!("{name} p={p}: double complex {total:?} vs {cell:?}"))?;
        }
        let co = group_table(&sh, Space::Comp, Variant::Cohomology, Coeff::Z);
        let ho = group_table(&sh, Space::Comp, Variant::Homology, Coeff::Z);
        for p in 0..=fan.dim() {
            for q in 0..=fan.dim() {
                let shifted = if q == 0 { Vec::new() } else { ho[p][q - 1].torsion.clone() };
                check(
                    co[p][q].free_rank == ho[p][q].free_rank && co[p][q].torsion == shifted,
                    format!("{name} ({p},{q}): universal coefficients"),
                )?;
            }
        }
    }
    Ok(format!("{complexes} complexes square to zero; double complexes and universal coefficients agree"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("cohomology tables of the cube", table_of_cube),
        ("torsion kernel on the one-dimensional fan", delta_example),
        ("torsion at (1,2) on the non-unimodular plane fan", sigma3_example),
        ("cubical complex oracle", cubical_oracle),
        ("vanishing, comparison and ring morphism", comparison_suite),
        ("homology manifold criterion", manifold_suite),
        ("cycle class bijection", cycle_class_suite),
        ("ampleness against curve positivity", kleiman_suite),
        ("structural invariants", structural_suite),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}: {title} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {title} ({why})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
