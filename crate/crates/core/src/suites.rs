//! Seeded verification suites. Each suite produces one [`CheckReport`] per
//! trial (plus aggregate reports where a property spans trials). Trial seeds
//! are derived from the run seed, the suite and the trial index, so running
//! trials in parallel cannot change the output.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::casimir_weights::{
    exterior2_highest_weight, model_casimir_residual, so_casimir_scalar, spin_highest_weight, strange_formula_check,
    vector_highest_weight,
};
use crate::curvature::{four_dim_blocks, random_curvature, random_positive, random_symmetric, CurvatureOperator};
use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, Matrix};
use crate::report::{curvature_digest, CheckReport, Inputs};
use crate::representations::{casimir, rep_standard, StandardKind};
use crate::rng::derive;
use crate::selectors::CurvatureSource;
use crate::so_algebra::{simple_algebra, SoBasis, TypeRank};
use crate::spin::rep_spin;
use crate::weitzenbock::{
    default_family, k_matrix, k_term, lemma_check, positivity_report, FamilyEntry, LemmaSetup, LEMMA_TOL_LARGE,
};

pub const LICHNEROWICZ_TOL: f64 = 1e-9;
/// Residual a non-Bianchi input must exceed in the negative control.
pub const CONTROL_THRESHOLD: f64 = 1e-3;
/// Fraction of control trials that must exceed the threshold.
pub const CONTROL_FRACTION: f64 = 0.95;
pub const CONTROL_TRIALS: usize = 100;
pub const BOCHNER_TOL: f64 = 1e-10;
pub const CASIMIR_ENTRY_TOL: f64 = 1e-12;
pub const WEIGHT_TOL: f64 = 1e-9;
pub const GROUP_RICCI_TOL: f64 = 1e-10;
pub const GROUP_SPIN_TOL: f64 = 1e-9;
pub const BLOCKS_VANISH_TOL: f64 = 1e-9;
pub const BLOCKS_RATIO_TOL: f64 = 1e-6;
/// Smallest eigenvalue `−K` must reach to count as positive.
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Smallest eigenvalue of the random positive curvatures.
pub const POSITIVITY_MARGIN: f64 = 0.1;
/// Every this many `blocks4` trials, the sample is replaced by its Einstein
/// part.
pub const EINSTEIN_EVERY: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Lichnerowicz,
    Bochner,
    SphereCasimir,
    LemmaK2,
    LemmaK4,
    Strange,
    GroupModel,
    Blocks4,
    Positivity,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Lichnerowicz,
        Suite::Bochner,
        Suite::SphereCasimir,
        Suite::LemmaK2,
        Suite::LemmaK4,
        Suite::Strange,
        Suite::GroupModel,
        Suite::Blocks4,
        Suite::Positivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lichnerowicz => "lichnerowicz",
            Suite::Bochner => "bochner",
            Suite::SphereCasimir => "sphere-casimir",
            Suite::LemmaK2 => "lemma:k2",
            Suite::LemmaK4 => "lemma:k4",
            Suite::Strange => "strange",
            Suite::GroupModel => "group-model",
            Suite::Blocks4 => "blocks4",
            Suite::Positivity => "positivity",
        }
    }

    /// Whether the suite draws random curvatures.
    pub fn is_random(self) -> bool {
        !matches!(self, Suite::SphereCasimir | Suite::Strange | Suite::GroupModel)
    }

    /// Seed-derivation tag. Bochner shares the Lichnerowicz trials, so both
    /// identities are checked on the same curvatures.
    fn tag(self) -> u64 {
        let s = if self == Suite::Bochner { Suite::Lichnerowicz } else { self };
        Suite::ALL.iter().position(|&x| x == s).expect("listed") as u64 + 1
    }

    pub fn default_ns(self) -> Vec<usize> {
        match self {
            Suite::Lichnerowicz | Suite::Bochner => (3..=8).collect(),
            Suite::SphereCasimir => (2..=6).collect(),
            Suite::LemmaK2 => vec![3],
            Suite::LemmaK4 | Suite::Blocks4 => vec![4],
            Suite::Positivity => (3..=6).collect(),
            Suite::Strange | Suite::GroupModel => Vec::new(),
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Lichnerowicz | Suite::Bochner | Suite::LemmaK2 | Suite::LemmaK4 => 20,
            Suite::Blocks4 | Suite::Positivity => 100,
            Suite::SphereCasimir | Suite::Strange | Suite::GroupModel => 1,
        }
    }

    pub fn default_algebras(self) -> Vec<TypeRank> {
        let names: &[&str] = match self {
            Suite::Strange => &["A1", "A2", "B2", "C3", "D4", "G2"],
            Suite::GroupModel => &["A1", "A2"],
            _ => &[],
        };
        names.iter().map(|s| s.parse().expect("valid type")).collect()
    }

    /// Tolerances applied by the suite, keyed by check name.
    pub fn tolerances(self, overrides: Option<f64>) -> BTreeMap<String, f64> {
        let pick = |d: f64| overrides.unwrap_or(d);
        let entries: Vec<(&str, f64)> = match self {
            Suite::Lichnerowicz => vec![
                ("lichnerowicz", pick(LICHNEROWICZ_TOL)),
                ("lichnerowicz:control-threshold", CONTROL_THRESHOLD),
                ("lichnerowicz:control-fraction", CONTROL_FRACTION),
            ],
            Suite::Bochner => vec![("bochner", pick(BOCHNER_TOL))],
            Suite::SphereCasimir => vec![
                ("sphere-casimir", pick(CASIMIR_ENTRY_TOL)),
                ("sphere-casimir:weight", pick(WEIGHT_TOL)),
            ],
            Suite::LemmaK2 | Suite::LemmaK4 => vec![(self.name(), pick(LEMMA_TOL_LARGE))],
            Suite::Strange => vec![("strange", pick(1e-9))],
            Suite::GroupModel => vec![
                ("group-model:ricci", pick(GROUP_RICCI_TOL)),
                ("group-model:spin", pick(GROUP_SPIN_TOL)),
            ],
            Suite::Blocks4 => vec![
                ("blocks4:vanish", pick(BLOCKS_VANISH_TOL)),
                ("blocks4:ratio", BLOCKS_RATIO_TOL),
            ],
            Suite::Positivity => vec![("positivity", pick(POSITIVITY_TOL))],
        };
        entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

/// Options for a suite run. `None` fields take the suite defaults.
#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub ns: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub algebras: Option<Vec<TypeRank>>,
    /// A fixed curvature replacing the random trials.
    pub curvature: Option<CurvatureSource>,
    /// Replaces the suite's primary tolerance.
    pub tolerance: Option<f64>,
}

impl SuiteConfig {
    pub fn seeded(seed: u64) -> Self {
        SuiteConfig {
            seed,
            ..Self::default()
        }
    }

    /// The resolved options for `suite`, as echoed in reports.
    pub fn echo(&self, suite: Suite) -> serde_json::Value {
        serde_json::json!({
            "suite": suite.name(),
            "seed": self.seed,
            "ns": self.ns(suite),
            "trials": self.trials(suite),
            "algebras": algebras(self, suite).iter().map(ToString::to_string).collect::<Vec<_>>(),
            "curvature": self.curvature.as_ref().map(ToString::to_string),
            "tolerance": self.tolerance,
        })
    }

    fn ns(&self, suite: Suite) -> Vec<usize> {
        self.ns.clone().unwrap_or_else(|| suite.default_ns())
    }

    fn trials(&self, suite: Suite) -> usize {
        self.trials.unwrap_or_else(|| suite.default_trials())
    }

    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

/// One curvature input of a trial: its seed (absent for fixed sources) and
/// the operator.
struct Trial {
    seed: Option<u64>,
    r: CurvatureOperator,
}

impl Trial {
    fn inputs(&self) -> Inputs {
        let inputs = Inputs::default().with_digest("curvature", curvature_digest(&self.r));
        match self.seed {
            Some(s) => inputs.with_seed(s),
            None => inputs,
        }
    }
}

fn trial_seed(cfg: &SuiteConfig, suite: Suite, n: usize, i: usize) -> u64 {
    derive(cfg.seed, suite.tag() * 1000 + n as u64, i as u64)
}

/// Runs `f` on every trial in order, in parallel. With a fixed curvature
/// source there is exactly one trial.
fn run_trials<F>(
    cfg: &SuiteConfig,
    suite: Suite,
    n: usize,
    make: impl Fn(usize, u64) -> Result<CurvatureOperator> + Sync,
    f: F,
) -> Result<Vec<CheckReport>>
where
    F: Fn(usize, Trial) -> Result<CheckReport> + Sync,
{
    if let Some(src) = &cfg.curvature {
        let r = src.load(Some(n))?;
        return Ok(vec![f(0, Trial { seed: None, r })?]);
    }
    (0..cfg.trials(suite))
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(cfg, suite, n, i);
            f(i, Trial { seed: Some(seed), r: make(i, seed)? })
        })
        .collect()
}

fn fixed_n(cfg: &SuiteConfig, suite: Suite) -> Result<Vec<usize>> {
    match &cfg.curvature {
        Some(src) => match src.intrinsic_n()? {
            Some(n) => Ok(vec![n]),
            None => Ok(cfg.ns(suite)),
        },
        None => Ok(cfg.ns(suite)),
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    match suite {
        Suite::Lichnerowicz => lichnerowicz(cfg),
        Suite::Bochner => bochner(cfg),
        Suite::SphereCasimir => sphere_casimir(cfg),
        Suite::LemmaK2 => lemma(cfg, suite, 2),
        Suite::LemmaK4 => lemma(cfg, suite, 4),
        Suite::Strange => strange(cfg),
        Suite::GroupModel => group_model(cfg),
        Suite::Blocks4 => blocks4(cfg),
        Suite::Positivity => positivity(cfg),
    }
}

/// `‖−4K_spin − (s/4)·I‖_F / (1 + ‖K‖_F)`.
pub fn lichnerowicz_residual(r: &CurvatureOperator) -> Result<(f64, Matrix)> {
    let spin = rep_spin(&Arc::new(SoBasis::new(r.n())?))?;
    let k = k_matrix(r, &spin)?;
    let target = Matrix::identity(spin.dim()).scale_real(r.scalar() / 4.0);
    let resid = (&k.scale_real(-4.0) - &target).norm_fro() / (1.0 + k.norm_fro());
    Ok((resid, k))
}

fn lichnerowicz(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let suite = Suite::Lichnerowicz;
    let tol = cfg.tol(LICHNEROWICZ_TOL);
    let mut out = Vec::new();
    for n in fixed_n(cfg, suite)? {
        out.extend(run_trials(cfg, suite, n, |_, s| random_curvature(n, s), |_, t| {
            let (resid, k) = lichnerowicz_residual(&t.r)?;
            let spectrum = eig_hermitian(&k.hermitian_part())?.values;
            Ok(CheckReport::residual_check("lichnerowicz", t.inputs(), resid, tol)
                .with_spectrum(spectrum)
                .with_details(serde_json::json!({
                    "n": n,
                    "scalar": t.r.scalar(),
                    "bianchi": t.r.bianchi_flag(),
                })))
        })?);
    }
    if cfg.curvature.is_none() {
        out.push(lichnerowicz_control(cfg)?);
    }
    Ok(out)
}

/// Non-Bianchi symmetric inputs at `n = 4` should break the identity. The
/// residual is the fraction of trials that stay within the threshold.
fn lichnerowicz_control(cfg: &SuiteConfig) -> Result<CheckReport> {
    let n = 4;
    let seeds: Vec<u64> = (0..CONTROL_TRIALS)
        .map(|i| derive(cfg.seed, Suite::Lichnerowicz.tag() * 1000 + 900 + n as u64, i as u64))
        .collect();
    let residuals = seeds
        .par_iter()
        .map(|&s| Ok(lichnerowicz_residual(&random_symmetric(n, s)?)?.0))
        .collect::<Result<Vec<f64>>>()?;
    let exceeding = residuals.iter().filter(|&&x| x > CONTROL_THRESHOLD).count();
    let within = CONTROL_TRIALS - exceeding;
    let inputs = Inputs {
        seeds,
        ..Inputs::default()
    };
    let min = residuals.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(CheckReport::residual_check(
        "lichnerowicz:control",
        inputs,
        within as f64 / CONTROL_TRIALS as f64,
        1.0 - CONTROL_FRACTION,
    )
    .with_details(serde_json::json!({
        "n": n,
        "trials": CONTROL_TRIALS,
        "threshold": CONTROL_THRESHOLD,
        "exceeding": exceeding,
        "min_residual": min,
    })))
}

/// `‖−2K_vector − Ric‖_F`.
pub fn bochner_residual(r: &CurvatureOperator) -> Result<f64> {
    let v = rep_standard(&Arc::new(SoBasis::new(r.n())?), StandardKind::Vector)?;
    let k = k_matrix(r, &v)?;
    let ric = Matrix::from_real_rows(&r.ricci());
    Ok((&k.scale_real(-2.0) - &ric).norm_fro())
}

fn bochner(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let suite = Suite::Bochner;
    let tol = cfg.tol(BOCHNER_TOL);
    let mut out = Vec::new();
    for n in fixed_n(cfg, suite)? {
        out.extend(run_trials(cfg, suite, n, |_, s| random_curvature(n, s), |_, t| {
            let resid = bochner_residual(&t.r)?;
            Ok(CheckReport::residual_check("bochner", t.inputs(), resid, tol)
                .with_details(serde_json::json!({ "n": n, "bianchi": t.r.bianchi_flag() })))
        })?);
    }
    Ok(out)
}

fn scalar_of(c: &Matrix) -> (f64, f64) {
    let d = c.rows() as f64;
    let s = c.trace().re / d;
    let dev = (c - &Matrix::identity(c.rows()).scale_real(s)).max_abs();
    (s, dev)
}

fn sphere_casimir(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let entry_tol = cfg.tol(CASIMIR_ENTRY_TOL);
    let weight_tol = cfg.tol(WEIGHT_TOL);
    let ns = cfg.ns(Suite::SphereCasimir);
    let per_n = ns
        .par_iter()
        .map(|&n| -> Result<Vec<CheckReport>> {
            let sphere = crate::curvature::sphere(n)?;
            let mut out = Vec::new();
            for f in default_family(n)? {
                let k = k_term(&sphere, &f.rep)?;
                let c = casimir(&f.rep);
                let resid = (&k.matrix - &c).max_abs();
                out.push(
                    CheckReport::residual_check(
                        "sphere-casimir",
                        Inputs::default().with_digest("curvature", curvature_digest(&sphere)),
                        resid,
                        entry_tol,
                    )
                    .with_spectrum(k.spectrum)
                    .with_details(serde_json::json!({ "n": n, "rep": f.rep.label(), "dim": f.rep.dim() })),
                );
            }
            if n >= 3 {
                let b = Arc::new(SoBasis::new(n)?);
                let reps = [
                    ("vector", rep_standard(&b, StandardKind::Vector)?, vector_highest_weight(n)?),
                    ("exterior:2", rep_standard(&b, StandardKind::Exterior(2))?, exterior2_highest_weight(n)?),
                    ("spin", rep_spin(&b)?, spin_highest_weight(n)?),
                ];
                for (name, rep, hw) in reps {
                    let (s, dev) = scalar_of(&casimir(&rep));
                    let want = -so_casimir_scalar(n, &hw)?;
                    let resid = (s - want).abs().max(dev);
                    out.push(
                        CheckReport::residual_check("sphere-casimir:weight", Inputs::default(), resid, weight_tol)
                            .with_details(serde_json::json!({
                                "n": n,
                                "rep": name,
                                "highest_weight": crate::casimir_weights::format_weight(&hw),
                                "matrix_scalar": s,
                                "weight_scalar": want,
                            })),
                    );
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_n.into_iter().flatten().collect())
}

fn lemma(cfg: &SuiteConfig, suite: Suite, k: usize) -> Result<Vec<CheckReport>> {
    let tol = cfg.tol(LEMMA_TOL_LARGE);
    let ns = if k == 4 { vec![4] } else { fixed_n(cfg, suite)? };
    let mut out = Vec::new();
    for n in ns {
        let setup = if k == 4 {
            LemmaSetup::curvature_tensor_spin4()?
        } else {
            LemmaSetup::sym2_spin(n)?
        };
        out.extend(run_trials(cfg, suite, n, |_, s| random_curvature(n, s), |_, t| {
            let mut rep = lemma_check(&t.r, &setup)?;
            rep.inputs.seeds.extend(t.seed);
            rep.tolerance = tol;
            rep.pass = rep.residual.is_finite() && rep.residual <= tol;
            Ok(rep)
        })?);
    }
    Ok(out)
}

fn algebras(cfg: &SuiteConfig, suite: Suite) -> Vec<TypeRank> {
    cfg.algebras.clone().unwrap_or_else(|| suite.default_algebras())
}

fn strange(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    algebras(cfg, Suite::Strange)
        .into_iter()
        .map(|t| {
            let mut rep = strange_formula_check(&simple_algebra(t)?);
            if let Some(tol) = cfg.tolerance {
                rep.tolerance = tol * t.dim() as f64;
                rep.pass = rep.residual <= rep.tolerance;
            }
            Ok(rep)
        })
        .collect()
}

/// `−½ Σ_c ρ_spin(ad y_c)²` on spinors of `so(dim g)`.
pub fn group_spin_term(g: &crate::so_algebra::SimpleAlgebraData) -> Result<Matrix> {
    let b = Arc::new(SoBasis::new(g.dim())?);
    let spin = rep_spin(&b)?;
    let mut acc = Matrix::zeros(spin.dim(), spin.dim());
    for ad in &g.ad {
        let x = spin.act(&b.coords(ad));
        acc += &x.matmul(&x);
    }
    Ok(acc.scale_real(-0.5))
}

fn group_model(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let ricci_tol = cfg.tol(GROUP_RICCI_TOL);
    let spin_tol = cfg.tol(GROUP_SPIN_TOL);
    let mut out = Vec::new();
    for t in algebras(cfg, Suite::GroupModel) {
        let g = simple_algebra(t)?;
        let dim = g.dim();
        let r = crate::curvature::bi_invariant_group(&g)?;
        let inputs = Inputs::default().with_digest("curvature", curvature_digest(&r));
        let ric = r.ricci();
        let ric_dev = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| (ric[i][j] - if i == j { 0.25 } else { 0.0 }).abs())
            .fold(0.0, f64::max);
        let scalar = r.scalar();
        let scalar_dev = (scalar - dim as f64 / 4.0).abs();
        out.push(
            CheckReport::residual_check(
                format!("group-model:ricci:{t}"),
                inputs.clone(),
                ric_dev.max(scalar_dev),
                ricci_tol,
            )
            .with_details(serde_json::json!({
                "algebra": t.to_string(),
                "dim": dim,
                "ricci_deviation": ric_dev,
                "scalar": scalar,
                "expected_scalar": dim as f64 / 4.0,
                "bianchi": r.bianchi_flag(),
            })),
        );
        let (model_resid, c) = model_casimir_residual(&g)?;
        out.push(
            CheckReport::residual_check(format!("group-model:casimir:{t}"), Inputs::default(), model_resid, ricci_tol)
                .with_details(serde_json::json!({
                    "algebra": t.to_string(),
                    "defining_weight": crate::casimir_weights::format_weight(&g.defining_weight),
                    "casimir_scalar": c.to_string(),
                })),
        );
        if dim <= 8 {
            let term = group_spin_term(&g)?;
            let want = Matrix::identity(term.rows()).scale_real(dim as f64 / 16.0);
            let resid = (&term - &want).max_abs();
            let spectrum = eig_hermitian(&term.hermitian_part())?.values;
            out.push(
                CheckReport::residual_check(format!("group-model:spin:{t}"), inputs, resid, spin_tol)
                    .with_spectrum(spectrum)
                    .with_details(serde_json::json!({
                        "algebra": t.to_string(),
                        "expected": dim as f64 / 16.0,
                    })),
            );
        }
    }
    Ok(out)
}

fn frob(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn blocks4(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let suite = Suite::Blocks4;
    let tol = cfg.tol(BLOCKS_VANISH_TOL);
    let make = |i: usize, s: u64| {
        let r = random_curvature(4, s)?;
        if i.is_multiple_of(EINSTEIN_EVERY) {
            r.einstein_part()
        } else {
            Ok(r)
        }
    };
    let mut out = run_trials(cfg, suite, 4, make, |i, t| {
        let blocks = four_dim_blocks(&t.r)?;
        let mixed = blocks.mixed_norm();
        let ric0 = frob(&t.r.traceless_ricci());
        let einstein = ric0 <= tol;
        let agree = (mixed <= tol) == einstein;
        let ratio = if einstein { None } else { Some(mixed / ric0) };
        Ok(CheckReport::residual_check("blocks4:iff", t.inputs(), if agree { 0.0 } else { 1.0 }, 0.0)
            .with_details(serde_json::json!({
                "trial": i,
                "einstein_sample": cfg.curvature.is_none() && i % EINSTEIN_EVERY == 0,
                "mixed_norm": mixed,
                "traceless_ricci_norm": ric0,
                "ratio": ratio,
                "scalar": blocks.scalar,
            })))
    })?;
    let ratios: Vec<f64> = out
        .iter()
        .filter_map(|r| r.details.get("ratio").and_then(serde_json::Value::as_f64))
        .collect();
    if !ratios.is_empty() {
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut inputs = Inputs::default();
        inputs.seeds = out.iter().flat_map(|r| r.inputs.seeds.clone()).collect();
        out.push(
            CheckReport::residual_check("blocks4:ratio", inputs, (hi - lo) / mean, BLOCKS_RATIO_TOL).with_details(
                serde_json::json!({
                    "samples": ratios.len(),
                    "constant": mean,
                    "min": lo,
                    "max": hi,
                }),
            ),
        );
    }
    Ok(out)
}

/// Residual of the forward implication: `max(0, tol − min −K)` over the
/// nontrivial irreducible entries, so the check passes iff each such
/// `−K` has smallest eigenvalue at least `tol`.
fn positivity_check(
    r: &CurvatureOperator,
    family: &[FamilyEntry],
    tol: f64,
    inputs: Inputs,
) -> Result<Vec<CheckReport>> {
    let report = positivity_report(r, family, tol)?;
    let min = report
        .entries
        .iter()
        .filter(|e| e.irreducible && !e.trivial)
        .map(|e| e.min_neg_k)
        .fold(f64::INFINITY, f64::min);
    let details = serde_json::to_value(&report).map_err(|e| Error::Schema(e.to_string()))?;
    let mut out = Vec::new();
    let main = CheckReport::residual_check("positivity", inputs.clone(), (tol - min).max(0.0), 0.0)
        .with_spectrum(report.r_spectrum.clone())
        .with_details(details);
    match report.forward {
        Some(holds) => {
            let mut main = main;
            main.pass = holds && main.pass;
            out.push(main);
        }
        None => out.push(main.as_diagnostic()),
    }
    if let Some(search) = &report.search {
        let found = search.counterexample.as_ref().map_or(0.0, |c| c.max_k);
        out.push(
            CheckReport::residual_check("positivity:search", inputs, found, tol)
                .as_diagnostic()
                .with_details(serde_json::to_value(search).map_err(|e| Error::Schema(e.to_string()))?),
        );
    }
    Ok(out)
}

fn positivity(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let suite = Suite::Positivity;
    let tol = cfg.tol(POSITIVITY_TOL);
    let mut out = Vec::new();
    for n in fixed_n(cfg, suite)? {
        let family = default_family(n)?;
        if let Some(src) = &cfg.curvature {
            let r = src.load(Some(n))?;
            let inputs = Inputs::default().with_digest("curvature", curvature_digest(&r));
            out.extend(positivity_check(&r, &family, tol, inputs)?);
            continue;
        }
        let reports = (0..cfg.trials(suite))
            .into_par_iter()
            .map(|i| {
                let seed = trial_seed(cfg, suite, n, i);
                let r = random_positive(n, seed, POSITIVITY_MARGIN)?;
                let inputs = Inputs::default()
                    .with_digest("curvature", curvature_digest(&r))
                    .with_seed(seed);
                positivity_check(&r, &family, tol, inputs)
            })
            .collect::<Result<Vec<_>>>()?;
        out.extend(reports.into_iter().flatten());
    }
    Ok(out)
}
