mod io;
mod render;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tropfan_core::chow::{chow_group, minkowski_weights, multiply_by_ray, ChowClass, ChowError};
use tropfan_core::criteria::{comparison_report, homology_manifold_check, is_ample, kleiman_check, Comparison, Verdict};
use tropfan_core::fan::{Fan, ValidationLevel};
use tropfan_core::homology::{build_complex, Coeff, Space, Variant};
use tropfan_core::sheaf::Sheaf;
use tropfan_core::zlinalg::{AbGroup, Rat};

use io::{FanFile, FunctionFile, InputError, LoadedFan, MatroidFile};
use render::{cone, grid, pq_table};

#[derive(Parser)]
#[command(name = "tropfan", version, about = "Tropical cohomology, Chow rings and Minkowski weights of simplicial fans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceArg {
    Fan,
    Comp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    /// Cohomology.
    Std,
    /// Borel–Moore homology.
    Bm,
    /// Cohomology with compact support.
    C,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CoeffArg {
    #[value(name = "Z", alias = "z")]
    Z,
    #[value(name = "Q", alias = "q")]
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AmpleMode {
    Lp,
    Kleiman,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Structural properties of a fan.
    Diagnostics {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// The full (p, q) table of (co)homology groups.
    Cohomology {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, value_enum, default_value = "comp")]
        space: SpaceArg,
        #[arg(long, value_enum, default_value = "std")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "Z")]
        coeff: CoeffArg,
        #[arg(long)]
        json: bool,
    },
    /// Chow groups, optionally with products by ray classes.
    Chow {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value = "Z")]
        coeff: CoeffArg,
        /// Print `x_ρ · x_σ` for every ray and every generator.
        #[arg(long)]
        products: bool,
        #[arg(long)]
        json: bool,
    },
    /// A basis of Minkowski weights.
    Mw {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write the Bergman fan of a matroid as a fan file.
    Bergman {
        #[arg(long)]
        matroid: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// The homology-manifold criterion at every cone.
    ManifoldCheck {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, value_enum, default_value = "Z")]
        coeff: CoeffArg,
        #[arg(long)]
        json: bool,
    },
    /// Ampleness of a conewise linear function.
    Ample {
        #[arg(long)]
        fan: PathBuf,
        /// File with `ray_values`; defaults to the values in the fan file.
        #[arg(long)]
        function: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        mode: AmpleMode,
        #[arg(long)]
        json: bool,
    },
    /// Vanishing, comparison with Chow groups, round trips and ring checks.
    Verify {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

struct Outcome {
    text: String,
    json: serde_json::Value,
    holds: bool,
}

/// The JSON form of a (co)homology table.
#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub fan: String,
    pub space: String,
    pub variant: String,
    pub coeff: String,
    pub table: Vec<Vec<String>>,
}

fn coeff(c: CoeffArg) -> Coeff {
    match c {
        CoeffArg::Z => Coeff::Z,
        CoeffArg::Q => Coeff::Q,
    }
}

fn coeff_name(c: Coeff) -> &'static str {
    match c {
        Coeff::Z => "Z",
        Coeff::Q => "Q",
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::True => "true".into(),
        Verdict::False => "false".into(),
        Verdict::NotApplicable(r) => format!("not applicable ({r}); counted as true"),
    }
}

fn class_text(fan: &Fan, c: &ChowClass) -> String {
    let terms: Vec<String> = fan
        .cones_of_dim(c.degree)
        .iter()
        .zip(&c.coeffs)
        .filter(|(_, a)| !num_traits::Zero::is_zero(*a))
        .map(|(&s, a)| format!("{a}*x{}", cone(fan.cone(s))))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn require_unimodular(fan: &Fan, c: Coeff, what: &str) -> Result<(), CliError> {
    if c == Coeff::Z && !fan.is_unimodular() {
        return Err(CliError::Usage(format!("{what} over Z needs a unimodular fan; use --coeff Q")));
    }
    Ok(())
}

fn diagnostics(loaded: &LoadedFan) -> Outcome {
    let fan = &loaded.fan;
    let d = fan.validate(ValidationLevel::Geometric);
    let balanced = fan.is_balanced(&loaded.weights).unwrap_or(false);
    let props = [
        ("simplicial", d.is_simplicial()),
        ("valid fan", d.is_ok()),
        ("pure", fan.is_pure()),
        ("unimodular", fan.is_unimodular()),
        ("saturated", fan.is_saturated()),
        ("balanced", balanced),
    ];
    let mut text =
        format!("fan {}: rank {}, dimension {}, {} rays, {} cones\n", loaded.name, fan.rank(), fan.dim(), fan.num_rays(), fan.num_cones());
    for (k, v) in props {
        writeln!(text, "{k}: {v}").unwrap();
    }
    for (r, g) in &d.non_primitive {
        writeln!(text, "ray {r} is divisible by {g}").unwrap();
    }
    for (a, b) in &d.overlaps {
        writeln!(text, "cones {} and {} overlap", cone(a), cone(b)).unwrap();
    }
    let mut json = json!({
        "name": loaded.name,
        "rank": fan.rank(),
        "dim": fan.dim(),
        "rays": fan.num_rays(),
        "cones": fan.num_cones(),
        "report": d,
    });
    for (k, v) in props {
        json[k.replace(' ', "_")] = json!(v);
    }
    Outcome { text, json, holds: true }
}

fn cohomology(loaded: &LoadedFan, space: SpaceArg, variant: VariantArg, c: Coeff) -> Outcome {
    let sheaf = Sheaf::new(&loaded.fan);
    let (space, space_name, space_label) = match space {
        SpaceArg::Fan => (Space::Fan, "fan", "Σ"),
        SpaceArg::Comp => (Space::Comp, "comp", "Σ̄"),
    };
    let (variant, variant_name, label) = match variant {
        VariantArg::Std => (Variant::Cohomology, "std", format!("H^{{p,q}}({space_label})")),
        VariantArg::Bm => (Variant::BorelMoore, "bm", format!("H^BM_{{p,q}}({space_label})")),
        VariantArg::C => (Variant::CompactSupport, "c", format!("H_c^{{p,q}}({space_label})")),
    };
    let d = loaded.fan.dim();
    let table: Vec<Vec<String>> = (0..=d)
        .into_par_iter()
        .map(|p| {
            let g = build_complex(&sheaf, space, p, variant).groups(c);
            (0..=d).map(|q| g.get(q).cloned().unwrap_or_else(AbGroup::trivial).to_string()).collect()
        })
        .collect();
    let out = CohomologyTable {
        fan: loaded.name.clone(),
        space: space_name.into(),
        variant: variant_name.into(),
        coeff: coeff_name(c).into(),
        table,
    };
    let text = pq_table(&format!("{label}, coefficients {}", coeff_name(c)), &out.table);
    Outcome { text, json: serde_json::to_value(&out).unwrap(), holds: true }
}

fn chow(loaded: &LoadedFan, degree: Option<usize>, c: Coeff, products: bool) -> Result<Outcome, CliError> {
    let fan = &loaded.fan;
    let degrees: Vec<usize> = match degree {
        Some(k) if k > fan.dim() => return Err(CliError::Usage(format!("degree {k} exceeds the fan dimension {}", fan.dim()))),
        Some(k) => vec![k],
        None => (0..=fan.dim()).collect(),
    };
    let mut text = String::new();
    let mut entries = Vec::new();
    for k in degrees {
        let group = match chow_group(fan, k, c) {
            Ok(a) => a.group.to_string(),
            Err(ChowError::NotUnimodular(_)) => "n/a (needs a unimodular fan over Z)".into(),
            Err(e) => return Err(CliError::Internal(e.to_string())),
        };
        writeln!(text, "A^{k} = {group}").unwrap();
        let mut table = Vec::new();
        if products && k < fan.dim() {
            for ray in 0..fan.num_rays() {
                for &sigma in fan.cones_of_dim(k) {
                    let prod = multiply_by_ray(fan, ray, &ChowClass::generator(fan, sigma));
                    let line = class_text(fan, &prod);
                    writeln!(text, "  x{} * x{} = {line}", cone(&[ray]), cone(fan.cone(sigma))).unwrap();
                    table.push(json!({ "ray": ray, "cone": fan.cone(sigma), "product": prod }));
                }
            }
        }
        entries.push(json!({ "degree": k, "group": group, "products": table }));
    }
    Ok(Outcome { text, json: json!({ "fan": loaded.name, "coeff": coeff_name(c), "degrees": entries }), holds: true })
}

fn mw(loaded: &LoadedFan, p: usize) -> Result<Outcome, CliError> {
    let fan = &loaded.fan;
    if p > fan.dim() {
        return Err(CliError::Usage(format!("dimension {p} exceeds the fan dimension {}", fan.dim())));
    }
    let basis = minkowski_weights(fan, p);
    let cones: Vec<Vec<usize>> = fan.cones_of_dim(p).iter().map(|&s| fan.cone(s).to_vec()).collect();
    let mut text = format!("MW_{p} has rank {}\n", basis.len());
    if !basis.is_empty() {
        let headers: Vec<String> = std::iter::once("cone".to_string()).chain((0..basis.len()).map(|i| format!("w{i}"))).collect();
        let rows: Vec<Vec<String>> = cones
            .iter()
            .enumerate()
            .map(|(j, c)| std::iter::once(cone(c)).chain(basis.iter().map(|w| w.values[j].to_string())).collect())
            .collect();
        text.push_str(&grid(&headers, &rows));
    }
    let json = json!({
        "fan": loaded.name,
        "dim": p,
        "cones": cones,
        "basis": basis.iter().map(|w| w.values.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(Outcome { text, json, holds: true })
}

fn bergman(matroid: &Path, output: &Path) -> Result<Outcome, CliError> {
    let (name, m) = MatroidFile::load(matroid)?;
    let (fan, weights) = m.bergman_fan().map_err(|source| InputError::Matroid { path: matroid.display().to_string(), source })?;
    let file = FanFile::from_fan(&name, &fan, Some(&weights));
    let text = serde_json::to_string_pretty(&file).unwrap();
    std::fs::write(output, format!("{text}\n")).map_err(|e| CliError::Usage(format!("{}: {e}", output.display())))?;
    Ok(Outcome {
        text: format!("wrote {} ({} rays, {} maximal cones)\n", output.display(), fan.num_rays(), file.maximal_cones.len()),
        json: json!({ "output": output.display().to_string(), "rays": fan.num_rays(), "maximal_cones": file.maximal_cones.len() }),
        holds: true,
    })
}

fn manifold_check(loaded: &LoadedFan, c: Coeff) -> Result<Outcome, CliError> {
    require_unimodular(&loaded.fan, c, "the manifold check")?;
    let report = homology_manifold_check(&loaded.fan, &loaded.weights, c);
    let rows: Vec<Vec<String>> = report
        .faces
        .iter()
        .map(|f| vec![cone(&f.cone), verdict_text(&f.pd), f.vanishing.to_string(), f.witness.clone().unwrap_or_default()])
        .collect();
    let headers = ["cone", "poincare duality", "vanishing p>q", "witness"].map(String::from);
    let mut text = grid(&headers, &rows);
    writeln!(text, "{}", verdict_text(&report.verdict)).unwrap();
    Ok(Outcome { text, json: serde_json::to_value(&report).unwrap(), holds: report.verdict.holds() })
}

fn ample(loaded: &LoadedFan, function: Option<&Path>, mode: AmpleMode) -> Result<Outcome, CliError> {
    let fan = &loaded.fan;
    let f = match function {
        Some(path) => FunctionFile::load(path, fan.num_rays())?,
        None => loaded
            .function
            .clone()
            .ok_or_else(|| CliError::Usage("no function: pass --function or add ray_values to the fan file".into()))?,
    };
    let mut text = String::new();
    let mut json = json!({ "fan": loaded.name, "ray_values": f.values.iter().map(Rat::to_string).collect::<Vec<_>>() });
    let mut answers = Vec::new();
    if mode != AmpleMode::Kleiman {
        let r = is_ample(fan, &f);
        if let Some(c) = r.cones.iter().find(|c| !c.certified) {
            return Err(CliError::Internal(format!("LP certificate at cone {} failed to verify", cone(&c.cone))));
        }
        writeln!(text, "lp: {}", r.ample).unwrap();
        for c in r.cones.iter().filter(|c| !c.feasible) {
            writeln!(text, "  not strictly convex around {}", cone(&c.cone)).unwrap();
        }
        answers.push(r.ample);
        json["lp"] = serde_json::to_value(&r).unwrap();
    }
    if mode != AmpleMode::Lp {
        let r = kleiman_check(fan, &f);
        writeln!(text, "kleiman: {}", r.positive).unwrap();
        for s in &r.strata {
            if let Some(m) = &s.minimum {
                writeln!(text, "  stratum {}: minimum {m}", cone(&s.cone)).unwrap();
            }
        }
        answers.push(r.positive);
        json["kleiman"] = serde_json::to_value(&r).unwrap();
    }
    if answers.windows(2).any(|w| w[0] != w[1]) {
        return Err(CliError::Internal("the strict convexity and curve positivity tests disagree".into()));
    }
    Ok(Outcome { text, json, holds: answers.iter().all(|&a| a) })
}

fn verify(loaded: &LoadedFan) -> Outcome {
    let r = comparison_report(&loaded.fan);
    let mut text = pq_table("H^{p,q}(Σ̄), coefficients Z", &r.cohomology);
    writeln!(text, "unimodular: {}, saturated: {}", r.unimodular, r.saturated).unwrap();
    for c in &r.vanishing {
        let status = if c.holds {
            "vanishes"
        } else if c.holds_rationally {
            "torsion only"
        } else {
            "NONZERO"
        };
        writeln!(text, "H^{{{},{}}} = {}: {status}", c.p, c.q, c.group).unwrap();
    }
    for d in &r.degrees {
        let cmp = match &d.comparison {
            Comparison::Isomorphism => "isomorphism over Z".to_string(),
            Comparison::SurjectiveTorsionKernel { kernel } => format!("surjective over Z with kernel {kernel}"),
            Comparison::RationalIsomorphism => "isomorphism over Q".to_string(),
            Comparison::Failed { reason } => format!("FAILED: {reason}"),
        };
        let chow = d.chow.clone().unwrap_or_else(|| format!("Q^{}", d.chow_rational_rank));
        writeln!(text, "A^{} = {chow} -> H^{{{},{}}} = {}: {cmp}", d.p, d.p, d.p, d.h_pp).unwrap();
    }
    if r.unimodular {
        writeln!(text, "round trips: {} checked, {} failed", r.round_trips, r.round_trip_failures.len()).unwrap();
        writeln!(text, "ring checks: {} checked, {} failed", r.ring_checks, r.ring_failures.len()).unwrap();
    }
    let holds = r.theorem_holds();
    writeln!(text, "theorem holds: {holds}").unwrap();
    let mut json = serde_json::to_value(&r).unwrap();
    json["theorem_holds"] = json!(holds);
    Outcome { text, json, holds }
}

fn run(cli: Cli) -> Result<(Outcome, bool), CliError> {
    let load = |p: &Path| FanFile::load(p).map_err(CliError::from);
    Ok(match cli.command {
        Command::Diagnostics { fan, json } => (diagnostics(&load(&fan)?), json),
        Command::Cohomology { fan, space, variant, coeff: c, json } => (cohomology(&load(&fan)?, space, variant, coeff(c)), json),
        Command::Chow { fan, degree, coeff: c, products, json } => (chow(&load(&fan)?, degree, coeff(c), products)?, json),
        Command::Mw { fan, dim, json } => (mw(&load(&fan)?, dim)?, json),
        Command::Bergman { matroid, output } => (bergman(&matroid, &output)?, false),
        Command::ManifoldCheck { fan, coeff: c, json } => (manifold_check(&load(&fan)?, coeff(c))?, json),
        Command::Ample { fan, function, mode, json } => (ample(&load(&fan)?, function.as_deref(), mode)?, json),
        Command::Verify { fan, json } => (verify(&load(&fan)?), json),
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var("TROPFAN_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    configure_threads();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok((out, as_json))) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&out.json).unwrap());
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
        Err(_) => ExitCode::from(3),
    }
}
