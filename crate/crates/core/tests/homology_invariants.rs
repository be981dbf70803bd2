use tropfan_core::fixtures;
use tropfan_core::homology::{build_complex, group_table, Coeff, Space, Variant};
use tropfan_core::sheaf::Sheaf;
use tropfan_core::zlinalg::AbGroup;

const VARIANTS: [Variant; 4] = [Variant::Cohomology, Variant::Homology, Variant::BorelMoore, Variant::CompactSupport];

#[test]
fn every_complex_squares_to_zero() {
    for (name, fan) in fixtures::all() {
        let sh = Sheaf::new(&fan);
        for space in [Space::Fan, Space::Comp] {
            for variant in VARIANTS {
                for p in 0..=fan.dim() {
                    assert!(build_complex(&sh, space, p, variant).is_complex(), "{name} {space:?} {variant:?} {p}");
                }
            }
        }
    }
}

/// The cochains are the duals of the chains, so free ranks agree and torsion
/// moves up one degree.
#[test]
fn universal_coefficients() {
    for (name, fan) in fixtures::all() {
        let sh = Sheaf::new(&fan);
        let co = group_table(&sh, Space::Comp, Variant::Cohomology, Coeff::Z);
        let ho = group_table(&sh, Space::Comp, Variant::Homology, Coeff::Z);
        for p in 0..=fan.dim() {
            for q in 0..=fan.dim() {
                let below = if q == 0 { AbGroup::trivial() } else { ho[p][q - 1].clone() };
                assert_eq!(co[p][q].free_rank, ho[p][q].free_rank, "{name} ({p},{q})");
                assert_eq!(co[p][q].torsion, below.torsion, "{name} ({p},{q})");
            }
        }
        let c = group_table(&sh, Space::Fan, Variant::CompactSupport, Coeff::Z);
        let bm = group_table(&sh, Space::Fan, Variant::BorelMoore, Coeff::Z);
        for p in 0..=fan.dim() {
            for q in 0..=fan.dim() {
                let below = if q == 0 { AbGroup::trivial() } else { bm[p][q - 1].clone() };
                assert_eq!(c[p][q].free_rank, bm[p][q].free_rank, "{name} ({p},{q})");
                assert_eq!(c[p][q].torsion, below.torsion, "{name} ({p},{q})");
            }
        }
    }
}

#[test]
fn rational_tables_are_free_parts() {
    for (name, fan) in fixtures::all() {
        let sh = Sheaf::new(&fan);
        let z = group_table(&sh, Space::Comp, Variant::Cohomology, Coeff::Z);
        let q = group_table(&sh, Space::Comp, Variant::Cohomology, Coeff::Q);
        for (zr, qr) in z.iter().zip(&q) {
            for (a, b) in zr.iter().zip(qr) {
                assert_eq!(a.rationalize(), *b, "{name}");
            }
        }
    }
}

#[test]
fn vanishing_off_the_diagonal_for_unimodular_saturated_fans() {
    for (name, fan) in fixtures::all().into_iter().filter(|(_, f)| f.is_unimodular() && f.is_saturated()) {
        let sh = Sheaf::new(&fan);
        let table = group_table(&sh, Space::Comp, Variant::Cohomology, Coeff::Z);
        for (p, row) in table.iter().enumerate() {
            for (q, g) in row.iter().enumerate() {
                if p < q || (q == 0 && p > 0) {
                    assert!(g.is_trivial(), "{name} H^({p},{q}) = {g}");
                }
            }
        }
        let homology = group_table(&sh, Space::Comp, Variant::Homology, Coeff::Z);
        for (p, row) in homology.iter().enumerate().skip(1) {
            assert!(row[0].is_trivial(), "{name} H_({p},0)");
        }
    }
}

#[test]
fn compactification_of_the_projective_plane() {
    let sh = Sheaf::new(&fixtures::p2());
    let table = group_table(&sh, Space::Comp, Variant::Cohomology, Coeff::Z);
    let expected: Vec<Vec<AbGroup>> =
        (0..3).map(|p| (0..3).map(|q| if p == q { AbGroup::free(1) } else { AbGroup::trivial() }).collect()).collect();
    assert_eq!(table, expected);
}
