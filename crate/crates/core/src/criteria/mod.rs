//! Verifiers for the structural theorems: vanishing and the comparison with
//! Chow groups, Poincaré duality and the homology-manifold criterion, the
//! explicit duality map, and ampleness.

mod ample;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::chow::{
    chow_group, chow_multiply, cycle_class, degree_map, minkowski_weights, psi, psi_inverse, ChowClass, ChowError, MinkowskiWeight,
};
use crate::fan::{Fan, TropicalWeights};
use crate::homology::{build_complex, cup, cycle_class_chain, group_table, Cochain, Coeff, Space, Variant};
use crate::sheaf::Sheaf;
use crate::zlinalg::rational::det_rat;
use crate::zlinalg::{cokernel_group, det, hnf, kernel_basis, snf, solve_int_rows, AbGroup, IntMatrix, Rat, RatMatrix};

pub use ample::{is_ample, kleiman_check, AmpleReport, KleimanReport};

/// Three-valued outcome of a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    True,
    False,
    NotApplicable(String),
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Verdict::False)
    }

    /// The CLI reading: not-applicable counts as holding.
    pub fn holds(&self) -> bool {
        !self.is_false()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CriteriaError {
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error("duality map does not produce a balanced weight")]
    Unbalanced,
    #[error("weights are not balanced")]
    WeightsUnbalanced,
}

/// The comparison `A^p(Σ) → H^{p,p}(Σ̄)` given by the explicit cocycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Comparison {
    Isomorphism,
    SurjectiveTorsionKernel {
        kernel: String,
    },
    /// Only ranks were compared (the fan is not unimodular).
    RationalIsomorphism,
    Failed {
        reason: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingCell {
    pub p: usize,
    pub q: usize,
    pub group: String,
    pub holds: bool,
    /// Vanishing after tensoring with `Q`.
    pub holds_rationally: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub p: usize,
    pub chow: Option<String>,
    pub chow_rational_rank: usize,
    pub h_pp: String,
    pub rational_iso: bool,
    pub comparison: Comparison,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub dim: usize,
    pub unimodular: bool,
    pub saturated: bool,
    /// `H^{p,q}(Σ̄)` rendered, indexed `[p][q]`.
    pub cohomology: Vec<Vec<String>>,
    pub vanishing: Vec<VanishingCell>,
    pub degrees: Vec<DegreeReport>,
    pub round_trips: usize,
    pub round_trip_failures: Vec<String>,
    pub ring_checks: usize,
    pub ring_failures: Vec<String>,
}

impl ComparisonReport {
    pub fn vanishing_holds(&self) -> bool {
        self.vanishing.iter().all(|c| c.holds)
    }

    pub fn all_isomorphisms(&self) -> bool {
        self.degrees.iter().all(|d| d.comparison == Comparison::Isomorphism)
    }

    pub fn ring_morphism_holds(&self) -> bool {
        self.ring_failures.is_empty()
    }

    /// The statement with `Q` coefficients always, and with `Z` coefficients
    /// when the fan is unimodular and saturated.
    pub fn theorem_holds(&self) -> bool {
        let rational = self.vanishing.iter().all(|c| c.holds_rationally) && self.degrees.iter().all(|d| d.rational_iso);
        let integral = !(self.unimodular && self.saturated) || (self.vanishing_holds() && self.all_isomorphisms());
        rational && integral && self.ring_morphism_holds() && self.round_trip_failures.is_empty()
    }
}

/// Groups, vanishing, the comparison with Chow groups in every degree, and
/// ring-morphism checks on all products of generator preimages.
pub fn comparison_report(fan: &Fan) -> ComparisonReport {
    let sheaf = Sheaf::new(fan);
    let d = fan.dim();
    let unimodular = fan.is_unimodular();
    let table = group_table(&sheaf, Space::Comp, Variant::Cohomology, Coeff::Z);
    let cohomology: Vec<Vec<String>> = table.iter().map(|row| row.iter().map(|g| g.to_string()).collect()).collect();
    let mut vanishing = Vec::new();
    for (p, row) in table.iter().enumerate() {
        for (q, g) in row.iter().enumerate() {
            if p < q || (q == 0 && p > 0) {
                vanishing.push(VanishingCell { p, q, group: g.to_string(), holds: g.is_trivial(), holds_rationally: g.free_rank == 0 });
            }
        }
    }
    let mut preimages: HashMap<usize, Cochain> = HashMap::new();
    let degrees = (0..=d)
        .map(|p| {
            let chow_z = chow_group(fan, p, Coeff::Z).ok();
            let chow_q = chow_group(fan, p, Coeff::Q).expect("rational Chow groups of simplicial fans");
            let h = &table[p][p];
            let rational_iso = chow_q.group.free_rank == h.free_rank;
            let comparison = if unimodular {
                compare(&sheaf, p, &mut preimages)
            } else if rational_iso {
                Comparison::RationalIsomorphism
            } else {
                Comparison::Failed { reason: format!("rational ranks {} and {} differ", chow_q.group.free_rank, h.free_rank) }
            };
            DegreeReport {
                p,
                chow: chow_z.map(|a| a.group.to_string()),
                chow_rational_rank: chow_q.group.free_rank,
                h_pp: h.to_string(),
                rational_iso,
                comparison,
            }
        })
        .collect();
    let (round_trips, round_trip_failures) = if unimodular { round_trips(&sheaf, &mut preimages) } else { (0, Vec::new()) };
    let (ring_checks, ring_failures) = if unimodular { ring_checks(&sheaf, &mut preimages) } else { (0, Vec::new()) };
    ComparisonReport {
        dim: d,
        unimodular,
        saturated: fan.is_saturated(),
        cohomology,
        vanishing,
        degrees,
        round_trips,
        round_trip_failures,
        ring_checks,
        ring_failures,
    }
}

fn preimage<'a>(sheaf: &Sheaf, cone: usize, cache: &'a mut HashMap<usize, Cochain>) -> &'a Cochain {
    cache.entry(cone).or_insert_with(|| psi_inverse(sheaf, cone).expect("unimodular fan"))
}

/// Builds the matrix of `x_σ ↦ [ψ⁻¹(x_σ)]` in the coordinates of `H^{p,p}` and
/// reads off well-definedness, surjectivity and the kernel.
fn compare(sheaf: &Sheaf, p: usize, cache: &mut HashMap<usize, Cochain>) -> Comparison {
    let fan = sheaf.fan();
    let chow = chow_group(fan, p, Coeff::Z).expect("unimodular fan");
    let class_map = build_complex(sheaf, Space::Comp, p, Variant::Cohomology).class_map(p);
    let h = class_map.group();
    let width = h.free_rank + h.torsion.len();
    let cones = fan.cones_of_dim(p).to_vec();
    let mut rows = Vec::new();
    for &sigma in &cones {
        let c = class_map.class(&preimage(sheaf, sigma, cache).values).expect("preimages are cocycles");
        rows.push(c.free.into_iter().chain(c.torsion).collect::<Vec<_>>());
    }
    let images = IntMatrix::from_rows(&rows, width);
    let mut torsion_rows = Vec::new();
    for (i, d) in h.torsion.iter().enumerate() {
        let mut r = vec![BigInt::zero(); width];
        r[h.free_rank + i] = d.clone();
        torsion_rows.push(r);
    }
    let torsion_rows = IntMatrix::from_rows(&torsion_rows, width);
    let is_zero_in_h = |v: &[BigInt]| {
        v[..h.free_rank].iter().all(Zero::is_zero) && v[h.free_rank..].iter().zip(&h.torsion).all(|(x, d)| (x % d).is_zero())
    };
    for rel in chow.relations.to_rows() {
        if !is_zero_in_h(&images.vec_mul(&rel)) {
            return Comparison::Failed { reason: "relations do not map to zero".into() };
        }
    }
    let stacked = images.vstack(&torsion_rows);
    if width > 0 && !cokernel_group(&stacked).is_trivial() {
        return Comparison::Failed { reason: format!("not surjective onto {h}") };
    }
    let kernel = map_kernel(&stacked, cones.len(), &chow.relations);
    if kernel.is_trivial() {
        Comparison::Isomorphism
    } else if kernel.free_rank == 0 && kernel == AbGroup::new(0, chow.group.torsion.clone()) {
        Comparison::SurjectiveTorsionKernel { kernel: kernel.to_string() }
    } else {
        Comparison::Failed { reason: format!("kernel {kernel}") }
    }
}

/// `{x : x·images ∈ rowspan(torsion rows)} / rowspan(relations)`, where the
/// first `n` rows of `stacked` are the images.
fn map_kernel(stacked: &IntMatrix, n: usize, relations: &IntMatrix) -> AbGroup {
    let full = if stacked.cols() == 0 { IntMatrix::identity(stacked.rows()) } else { kernel_basis(&stacked.transpose()) };
    let gens: Vec<Vec<BigInt>> = full.to_rows().into_iter().map(|r| r[..n].to_vec()).filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    if gens.is_empty() {
        return AbGroup::trivial();
    }
    let h = hnf(&IntMatrix::from_rows(&gens, n));
    let basis: Vec<Vec<BigInt>> = h.to_rows().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let basis = IntMatrix::from_rows(&basis, n);
    let coords: Vec<Vec<BigInt>> =
        relations.to_rows().iter().map(|r| solve_int_rows(&basis, r).expect("relations lie in the kernel")).collect();
    cokernel_group(&IntMatrix::from_rows(&coords, basis.rows()))
}

fn round_trips(sheaf: &Sheaf, cache: &mut HashMap<usize, Cochain>) -> (usize, Vec<String>) {
    let fan = sheaf.fan();
    let mut failures = Vec::new();
    for sigma in 0..fan.num_cones() {
        let image = psi(sheaf, preimage(sheaf, sigma, cache)).expect("preimages are cocycles");
        if image != ChowClass::generator(fan, sigma) {
            failures.push(format!("{:?}", fan.cone(sigma)));
        }
    }
    (fan.num_cones(), failures)
}

fn ring_checks(sheaf: &Sheaf, cache: &mut HashMap<usize, Cochain>) -> (usize, Vec<String>) {
    let fan = sheaf.fan();
    let d = fan.dim();
    let mut count = 0;
    let mut failures = Vec::new();
    let cones: Vec<usize> = (1..fan.num_cones()).collect();
    for (i, &s) in cones.iter().enumerate() {
        for &t in &cones[i..] {
            let k = fan.cone_dim(s) + fan.cone_dim(t);
            if k > d {
                continue;
            }
            let a = preimage(sheaf, s, cache).clone();
            let b = preimage(sheaf, t, cache).clone();
            let lhs = psi(sheaf, &cup(sheaf, &a, &b)).expect("cup of cocycles is a cocycle");
            let rhs = chow_multiply(fan, &ChowClass::generator(fan, s), &ChowClass::generator(fan, t));
            let target = chow_group(fan, k, Coeff::Z).expect("unimodular fan");
            count += 1;
            if !target.equivalent(&lhs, &rhs).unwrap_or(false) {
                failures.push(format!("{:?} x {:?}", fan.cone(s), fan.cone(t)));
            }
        }
    }
    (count, failures)
}

#[derive(Clone, Debug, Serialize)]
pub struct GramEntry {
    pub k: usize,
    pub det: String,
}

/// Poincaré duality of `A^•(Σ)` with respect to the degree map of `ω`.
#[derive(Clone, Debug, Serialize)]
pub struct PdReport {
    pub verdict: Verdict,
    pub groups: Vec<String>,
    pub gram: Vec<GramEntry>,
    pub witness: Option<String>,
}

/// Torsion-freeness, `A^d ≅ Z` through the degree map, and unimodular pairings
/// `A^k × A^{d−k} → Z`. Over `Q` torsion is ignored and nonzero determinants suffice.
pub fn chow_pd_check(fan: &Fan, omega: &TropicalWeights, coeff: Coeff) -> PdReport {
    let na =
        |reason: &str| PdReport { verdict: Verdict::NotApplicable(reason.into()), groups: Vec::new(), gram: Vec::new(), witness: None };
    if !fan.is_pure() || !fan.is_balanced(omega).unwrap_or(false) {
        return na("weights are not balanced");
    }
    if coeff == Coeff::Z && !fan.is_unimodular() {
        return na("integral check needs a unimodular fan");
    }
    let d = fan.dim();
    let pres: Vec<_> = (0..=d).map(|k| chow_group(fan, k, coeff).expect("checked above")).collect();
    let groups = pres.iter().map(|a| a.group.to_string()).collect();
    let fail = |witness: String, gram: Vec<GramEntry>, groups: Vec<String>| PdReport {
        verdict: Verdict::False,
        groups,
        gram,
        witness: Some(witness),
    };
    if let Some(a) = pres.iter().find(|a| !a.group.is_free()) {
        return fail(format!("A^{} = {} has torsion", a.degree, a.group), Vec::new(), groups);
    }
    if pres[d].group.free_rank != 1 {
        return fail(format!("A^{d} = {}", pres[d].group), Vec::new(), groups);
    }
    let mut gram_entries = Vec::new();
    for k in 0..=d {
        let left = pres[k].free_basis();
        let right = pres[d - k].free_basis();
        if left.len() != right.len() {
            return fail(format!("ranks of A^{k} and A^{} differ", d - k), gram_entries, groups);
        }
        let mut m = RatMatrix::zeros(left.len(), right.len());
        for (i, x) in left.iter().enumerate() {
            for (j, y) in right.iter().enumerate() {
                m.set(i, j, degree_map(fan, omega, &chow_multiply(fan, x, y)).expect("balanced weights"));
            }
        }
        let det = if left.is_empty() { Rat::one() } else { det_rat(&m) };
        gram_entries.push(GramEntry { k, det: det.to_string() });
        let ok = match coeff {
            Coeff::Z => det.abs() == Rat::one(),
            Coeff::Q => !det.is_zero(),
        };
        if !ok {
            return fail(format!("pairing A^{k} x A^{} has determinant {det}", d - k), gram_entries, groups);
        }
    }
    PdReport { verdict: Verdict::True, groups, gram: gram_entries, witness: None }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceCheck {
    pub cone: Vec<usize>,
    pub pd: Verdict,
    pub vanishing: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifoldReport {
    pub verdict: Verdict,
    pub faces: Vec<FaceCheck>,
}

/// For every cone `σ`, including the origin: the star fan satisfies Poincaré
/// duality and `H^{p,q}(Σ̄^σ) = 0` for `p > q`.
pub fn homology_manifold_check(fan: &Fan, omega: &TropicalWeights, coeff: Coeff) -> ManifoldReport {
    let mut faces = Vec::new();
    for sigma in 0..fan.num_cones() {
        let star = fan.star_fan(sigma).expect("cone of the fan");
        let weights = star.induced_weights(omega);
        let pd = chow_pd_check(&star.fan, &weights, coeff);
        let sheaf = Sheaf::new(&star.fan);
        let table = group_table(&sheaf, Space::Comp, Variant::Cohomology, coeff);
        let mut witness = pd.witness.clone();
        let mut vanishing = true;
        'outer: for (p, row) in table.iter().enumerate() {
            for (q, g) in row.iter().enumerate().take(p) {
                if !g.is_trivial() {
                    vanishing = false;
                    witness = Some(format!("H^{{{p},{q}}} = {g}"));
                    break 'outer;
                }
            }
        }
        faces.push(FaceCheck { cone: fan.cone(sigma).to_vec(), pd: pd.verdict, vanishing, witness });
    }
    let verdict = if faces.iter().any(|f| f.pd.is_false() || !f.vanishing) {
        Verdict::False
    } else if let Some(FaceCheck { pd: Verdict::NotApplicable(r), .. }) = faces.iter().find(|f| matches!(f.pd, Verdict::NotApplicable(_))) {
        Verdict::NotApplicable(r.clone())
    } else {
        Verdict::True
    };
    ManifoldReport { verdict, faces }
}

/// `w(σ) = ⟨α, [Σ̄^σ_∞]⟩` for `σ ∈ Σ_{d−p}` and a cocycle `α` of bidegree `(p, p)`.
pub fn pd_map(sheaf: &Sheaf, omega: &TropicalWeights, alpha: &Cochain) -> Result<MinkowskiWeight, CriteriaError> {
    let fan = sheaf.fan();
    if alpha.p != alpha.q {
        return Err(ChowError::Bidegree(alpha.p, alpha.q).into());
    }
    let cx = build_complex(sheaf, Space::Comp, alpha.p, Variant::Cohomology);
    if alpha.q + 1 < cx.degrees() && !cx.out_map(alpha.q).mul_vec(&alpha.values).iter().all(Zero::is_zero) {
        return Err(ChowError::NotACocycle.into());
    }
    let d = fan.dim();
    let p = alpha.p;
    if p > d {
        return Err(ChowError::DegreeMismatch(p, d).into());
    }
    let mut values = Vec::new();
    for &sigma in fan.cones_of_dim(d - p) {
        let star_weights = TropicalWeights::from_map(
            fan.cones_of_dim(d).iter().filter(|&&eta| fan.is_face(sigma, eta)).map(|&eta| (eta, omega.weight(eta))).collect(),
        );
        let (k, chain) = cycle_class_chain(sheaf, sigma, &star_weights).map_err(|_| CriteriaError::WeightsUnbalanced)?;
        debug_assert_eq!(k, p);
        values.push(alpha.values.iter().zip(&chain).map(|(a, c)| a * c).sum());
    }
    let w = MinkowskiWeight { dim: d - p, values };
    if !w.is_balanced(fan) {
        return Err(CriteriaError::Unbalanced);
    }
    Ok(w)
}

/// Whether `pd_map` induces an isomorphism `H^{p,p}(Σ̄) → MW_{d−p}(Σ)`.
pub fn pd_map_is_isomorphism(sheaf: &Sheaf, omega: &TropicalWeights, p: usize) -> Result<bool, CriteriaError> {
    let fan = sheaf.fan();
    let d = fan.dim();
    let class_map = build_complex(sheaf, Space::Comp, p, Variant::Cohomology).class_map(p);
    if !class_map.group().is_free() {
        return Ok(false);
    }
    let mw = minkowski_weights(fan, d - p);
    let gens = class_map.free_generators();
    if gens.len() != mw.len() {
        return Ok(false);
    }
    if mw.is_empty() {
        return Ok(true);
    }
    let basis = IntMatrix::from_rows(&mw.iter().map(|w| w.values.clone()).collect::<Vec<_>>(), mw[0].values.len());
    let mut rows = Vec::new();
    for g in gens {
        let w = pd_map(sheaf, omega, &Cochain { p, q: p, values: g })?;
        match solve_int_rows(&basis, &w.values) {
            Some(c) => rows.push(c),
            None => return Ok(false),
        }
    }
    let m = IntMatrix::from_rows(&rows, mw.len());
    Ok(det(&m).abs().is_one())
}

/// The cycle class map on the basis of `MW_p(Σ)`, one row per basis weight,
/// in the coordinates of `H_{p,p}(Σ̄)`.
#[derive(Clone, Debug)]
pub struct CycleClassMatrix {
    pub matrix: IntMatrix,
    pub group: AbGroup,
}

impl CycleClassMatrix {
    /// Square with Smith form the identity onto a free group.
    pub fn is_bijection(&self) -> bool {
        self.group.is_free() && self.matrix.rows() == self.matrix.cols() && snf(&self.matrix).diag.iter().all(One::is_one)
    }
}

pub fn cycle_class_matrix(sheaf: &Sheaf, p: usize) -> CycleClassMatrix {
    let group = build_complex(sheaf, Space::Comp, p, Variant::Homology).class_map(p).group();
    let width = group.free_rank + group.torsion.len();
    let rows: Vec<Vec<BigInt>> = minkowski_weights(sheaf.fan(), p)
        .iter()
        .map(|w| {
            let c = cycle_class(sheaf, w).expect("basis weights are balanced").class;
            c.free.into_iter().chain(c.torsion).collect()
        })
        .collect();
    CycleClassMatrix { matrix: IntMatrix::from_rows(&rows, width), group }
}
