//! Command-line front end: `k`, `check`, `decompose` and `curvature`.
//!
//! Exit codes: 0 all checks pass, 1 a check failed or a precondition was
//! violated, 2 usage, schema or input error, 3 dimension mismatch.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::curvature::curvature_to_json;
use crate::error::{Error, Result};
use crate::numerics::eig_hermitian;
use crate::report::{curvature_digest, matrix_digest, CheckReport, Inputs, RunReport};
use crate::representations::{isotypic_decompose, rep_restrict, DEFAULT_DECOMPOSE_SEED, HOMOMORPHISM_TOL};
use crate::selectors::{CurvatureSource, RepSelector, SubalgebraSpec};
use crate::so_algebra::{SoBasis, TypeRank};
use crate::suites::{run_suite, Suite, SuiteConfig};
use crate::weitzenbock::{k_term, parse_t, vanishing_verdict, SELF_ADJOINT_TOL};

/// Environment variable overriding the default tolerance.
pub const TOLERANCE_ENV: &str = "WEITZ_TOLERANCE";
/// Environment variable switching on CI mode.
pub const CI_ENV: &str = "WEITZ_CI";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DIMENSION: i32 = 3;

/// Projector tolerance for `decompose`.
const PROJECTOR_TOL: f64 = 1e-10;
/// Threshold separating zero from nonzero eigenvalues of `tK` in the
/// vanishing verdict.
const VERDICT_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "weitz", version, about = "Curvature endomorphisms of Weitzenböck formulas")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format; JSON is canonical, the others are views of it.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Replace the primary tolerance (default from WEITZ_TOLERANCE).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// CI mode: random suites need an explicit --seed (also WEITZ_CI=1).
    #[arg(long, global = true)]
    pub ci: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Assemble K for a curvature and a representation.
    K(KArgs),
    /// Run a verification suite.
    Check(CheckArgs),
    /// Isotypic decomposition of a representation restricted to a subalgebra.
    Decompose(DecomposeArgs),
    /// Write a curvature operator as JSON.
    Curvature(CurvatureArgs),
}

#[derive(Args, Debug)]
pub struct KArgs {
    /// Dimension of the underlying space; optional when the curvature fixes it.
    #[arg(long)]
    pub n: Option<usize>,
    /// vector | exterior:p | sym:p | sym0 | spin | spin+ | spin- | adjoint | trivial | tensor:a,b
    #[arg(long)]
    pub rep: String,
    /// sphere | group:<type> | file:<path> | random:<seed> | random-symmetric:<seed>
    #[arg(long)]
    pub curvature: String,
    /// Constant t in tK, or a preset name (spinor-dirac, hodge, lichnerowicz, killing, curvature-tensor).
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub t: String,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// lichnerowicz | bochner | sphere-casimir | lemma:k2 | lemma:k4 | strange | group-model | blocks4 | positivity
    pub suite: String,
    /// Comma-separated list of dimensions.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Random trials per dimension (suite default otherwise).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Base seed for the random trials [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated simple algebras, e.g. A1,A2,G2.
    #[arg(long, value_delimiter = ',')]
    pub algebra: Option<Vec<String>>,
    /// Fixed curvature replacing the random trials.
    #[arg(long)]
    pub curvature: Option<String>,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Dimension of the underlying space.
    #[arg(long)]
    pub n: usize,
    /// Representation selector, as for `k`.
    #[arg(long)]
    pub rep: String,
    /// so-full | u:m | so-diag:p | file:<path>
    #[arg(long, default_value = "so-full")]
    pub sub: String,
    /// Seed of the generic commutant element used to split pieces.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CurvatureArgs {
    /// Dimension of the underlying space; optional when the source fixes it.
    #[arg(long)]
    pub n: Option<usize>,
    /// sphere | group:<type> | file:<path> | random:<seed> | random-symmetric:<seed>
    #[arg(long)]
    pub source: String,
    /// Apply the Bianchi projection before writing.
    #[arg(long)]
    pub project: bool,
}

/// Output text and exit code of one invocation.
pub struct Outcome {
    pub text: String,
    pub code: i32,
    /// The text is an error object rather than a report.
    pub error: bool,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DimensionMismatch(_) | Error::NotSquare { .. } => EXIT_DIMENSION,
        Error::Precondition(_) | Error::NotHermitian { .. } => EXIT_FAIL,
        Error::InvalidArgument(_) | Error::Unsupported(_) | Error::Schema(_) | Error::Io(_) | Error::Json(_) => {
            EXIT_USAGE
        }
    }
}

fn env_flag(name: &str) -> bool {
    std::env::var(name).is_ok_and(|v| !v.is_empty() && v != "0")
}

fn resolve_tolerance(flag: Option<f64>) -> Result<Option<f64>> {
    let tol = match flag {
        Some(t) => Some(t),
        None => match std::env::var(TOLERANCE_ENV) {
            Ok(s) if !s.trim().is_empty() => Some(
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("{TOLERANCE_ENV}='{s}' is not a number")))?,
            ),
            _ => None,
        },
    };
    match tol {
        Some(t) if !(t.is_finite() && t >= 0.0) => {
            Err(Error::InvalidArgument(format!("tolerance must be a non-negative number, got {t}")))
        }
        other => Ok(other),
    }
}

fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Pretty => report.to_pretty(),
    }
}

fn finish(report: RunReport, format: Format) -> Outcome {
    let code = if report.all_pass() { EXIT_PASS } else { EXIT_FAIL };
    Outcome {
        text: render(&report, format),
        code,
        error: false,
    }
}

fn cmd_k(g: &Global, a: &KArgs) -> Result<Outcome> {
    let source: CurvatureSource = a.curvature.parse()?;
    let selector: RepSelector = a.rep.parse()?;
    let r = source.load(a.n)?;
    let rep = selector.build(&Arc::new(SoBasis::new(r.n())?))?;
    let t = parse_t(&a.t)?;
    let k = k_term(&r, &rep)?;
    let tk = k.matrix.scale_real(t);
    let spectrum = eig_hermitian(&tk.hermitian_part())?.values;
    let verdict_tol = resolve_tolerance(g.tolerance)?.unwrap_or(VERDICT_TOL);
    let verdict = vanishing_verdict(&tk, verdict_tol)?;
    let sa_tol = SELF_ADJOINT_TOL * (1.0 + k.matrix.norm_fro());
    let inputs = Inputs::default().with_digest("curvature", curvature_digest(&r));
    let inputs = match source {
        CurvatureSource::Random(s) | CurvatureSource::RandomSymmetric(s) => inputs.with_seed(s),
        _ => inputs,
    };
    let check = CheckReport::residual_check("k:self-adjoint", inputs, k.self_adjoint_residual, sa_tol)
        .with_spectrum(spectrum)
        .with_details(serde_json::json!({
            "rep": rep.label(),
            "dim": rep.dim(),
            "t": t,
            "k_spectrum": k.spectrum,
            "vanishing": verdict,
            "verdict_tolerance": verdict_tol,
            "bianchi": r.bianchi_flag(),
            "scalar": r.scalar(),
        }));
    let config = serde_json::json!({
        "n": r.n(),
        "rep": selector.to_string(),
        "curvature": source.to_string(),
        "t": a.t,
    });
    let tolerances = BTreeMap::from([
        ("k:self-adjoint".to_string(), SELF_ADJOINT_TOL),
        ("vanishing".to_string(), verdict_tol),
    ]);
    let seed = match source {
        CurvatureSource::Random(s) | CurvatureSource::RandomSymmetric(s) => Some(s),
        _ => None,
    };
    Ok(finish(RunReport::new("k", config, tolerances, seed, vec![check]), g.format))
}

fn cmd_check(g: &Global, a: &CheckArgs, ci: bool) -> Result<Outcome> {
    let suite: Suite = a.suite.parse()?;
    let curvature = a.curvature.as_deref().map(str::parse::<CurvatureSource>).transpose()?;
    let draws_random = match &curvature {
        Some(c) => c.is_random(),
        None => suite.is_random(),
    };
    if ci && draws_random && a.seed.is_none() && !curvature.as_ref().is_some_and(CurvatureSource::is_random) {
        return Err(Error::InvalidArgument(format!(
            "suite '{suite}' draws random curvatures; --seed is mandatory in CI mode"
        )));
    }
    let algebras = a
        .algebra
        .as_ref()
        .map(|v| v.iter().map(|s| s.parse::<TypeRank>()).collect::<Result<Vec<_>>>())
        .transpose()?;
    let tolerance = resolve_tolerance(g.tolerance)?;
    let cfg = SuiteConfig {
        seed: a.seed.unwrap_or(0),
        ns: a.n.clone(),
        trials: a.trials,
        algebras,
        curvature,
        tolerance,
    };
    if cfg.trials == Some(0) {
        return Err(Error::InvalidArgument("--trials must be at least 1".into()));
    }
    let reports = run_suite(suite, &cfg)?;
    let seed = draws_random.then_some(cfg.seed);
    Ok(finish(
        RunReport::new(format!("check {suite}"), cfg.echo(suite), suite.tolerances(tolerance), seed, reports),
        g.format,
    ))
}

fn cmd_decompose(g: &Global, a: &DecomposeArgs) -> Result<Outcome> {
    let selector: RepSelector = a.rep.parse()?;
    let spec: SubalgebraSpec = a.sub.parse()?;
    let basis = Arc::new(SoBasis::new(a.n)?);
    let rep = selector.build(&basis)?;
    let h = Arc::new(spec.build(a.n)?);
    let restricted = rep_restrict(&rep, &h)?;
    let seed = a.seed.unwrap_or(DEFAULT_DECOMPOSE_SEED);
    let pieces = isotypic_decompose(&restricted, seed)?;
    let tol = resolve_tolerance(g.tolerance)?.unwrap_or(PROJECTOR_TOL);

    let d = restricted.dim();
    let mut sum = crate::numerics::Matrix::zeros(d, d);
    let mut idem: f64 = 0.0;
    let mut cross: f64 = 0.0;
    for (i, p) in pieces.iter().enumerate() {
        sum += &p.projector;
        idem = idem.max((&p.projector.matmul(&p.projector) - &p.projector).max_abs());
        for q in &pieces[i + 1..] {
            cross = cross.max(p.projector.matmul(&q.projector).max_abs());
        }
    }
    let complete = (&sum - &crate::numerics::Matrix::identity(d)).max_abs();
    let hom = restricted.homomorphism_residual();
    let table: Vec<serde_json::Value> = pieces
        .iter()
        .map(|p| {
            serde_json::json!({
                "dim": p.dim,
                "multiplicity": p.multiplicity,
                "irreducible_dim": p.irreducible_dim(),
                "casimir": p.casimir_eigenvalue,
                "projector_digest": matrix_digest(&p.projector),
            })
        })
        .collect();
    let inputs = Inputs::default().with_seed(seed);
    let reports = vec![
        CheckReport::residual_check("decompose:homomorphism", inputs.clone(), hom, HOMOMORPHISM_TOL),
        CheckReport::residual_check("decompose:projectors", inputs, idem.max(cross).max(complete), tol)
            .with_spectrum(pieces.iter().map(|p| p.casimir_eigenvalue).collect())
            .with_details(serde_json::json!({
                "algebra": h.label(),
                "subalgebra_dim": h.dim(),
                "rep": rep.label(),
                "dim": d,
                "idempotency": idem,
                "orthogonality": cross,
                "completeness": complete,
                "pieces": table,
            })),
    ];
    let config = serde_json::json!({
        "n": a.n,
        "rep": selector.to_string(),
        "sub": spec.to_string(),
        "seed": seed,
    });
    let tolerances = BTreeMap::from([
        ("decompose:homomorphism".to_string(), HOMOMORPHISM_TOL),
        ("decompose:projectors".to_string(), tol),
    ]);
    Ok(finish(RunReport::new("decompose", config, tolerances, Some(seed), reports), g.format))
}

fn cmd_curvature(a: &CurvatureArgs) -> Result<Outcome> {
    let source: CurvatureSource = a.source.parse()?;
    let mut r = source.load(a.n)?;
    if a.project {
        r = r.bianchi_project();
    }
    Ok(Outcome {
        text: curvature_to_json(&r),
        code: EXIT_PASS,
        error: false,
    })
}

/// Runs a parsed command line. Errors become a JSON error object on the
/// output with the mapped exit code.
pub fn execute(cli: &Cli) -> Outcome {
    let ci = cli.global.ci || env_flag(CI_ENV);
    let result = match &cli.command {
        Command::K(a) => cmd_k(&cli.global, a),
        Command::Check(a) => cmd_check(&cli.global, a, ci),
        Command::Decompose(a) => cmd_decompose(&cli.global, a),
        Command::Curvature(a) => cmd_curvature(a),
    };
    result.unwrap_or_else(|e| Outcome {
        text: crate::report::to_json_string(&serde_json::json!({
            "tool": "weitz",
            "version": crate::report::VERSION,
            "error": e.to_string(),
            "exit_code": exit_code(&e),
        })),
        code: exit_code(&e),
        error: true,
    })
}

/// Parses and executes without touching stdout, stderr or `--output`. Usage
/// errors come back as clap's message with exit code 2; help and version
/// text come back with code 0.
pub fn execute_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            Outcome {
                text: e.to_string(),
                code: if help { EXIT_PASS } else { EXIT_USAGE },
                error: !help,
            }
        }
    }
}

/// Full entry point: parses `args`, executes, writes the output and returns
/// the exit code. Error reports go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
        }
    };
    let out = execute(&cli);
    if out.error {
        eprint!("{}", out.text);
        return out.code;
    }
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, &out.text),
        None => std::io::stdout().lock().write_all(out.text.as_bytes()),
    };
    match written {
        Ok(()) => out.code,
        Err(e) => {
            eprintln!("weitz: cannot write output: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("weitz").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn spin_on_sphere_gives_scalar_over_four() {
        let out = execute(&parse(&["k", "--n", "4", "--rep", "spin", "--curvature", "sphere", "--t", "-4"]));
        assert_eq!(out.code, 0);
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        for x in v["reports"][0]["spectrum"].as_array().unwrap() {
            assert!((x.as_f64().unwrap() - 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exit_codes() {
        let bad_rep = execute(&parse(&["k", "--n", "3", "--rep", "banana", "--curvature", "sphere"]));
        assert_eq!(bad_rep.code, EXIT_USAGE);
        let mismatch = execute(&parse(&["k", "--n", "4", "--rep", "vector", "--curvature", "group:A1"]));
        assert_eq!(mismatch.code, EXIT_DIMENSION);
        let suite = execute(&parse(&["check", "nope"]));
        assert_eq!(suite.code, EXIT_USAGE);
        assert_eq!(run(["weitz", "frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn ci_mode_needs_seed() {
        let out = execute(&parse(&["--ci", "check", "bochner", "--n", "3", "--trials", "1"]));
        assert_eq!(out.code, EXIT_USAGE);
        let out = execute(&parse(&["--ci", "check", "bochner", "--n", "3", "--trials", "1", "--seed", "4"]));
        assert_eq!(out.code, EXIT_PASS);
        let out = execute(&parse(&["--ci", "check", "strange"]));
        assert_eq!(out.code, EXIT_PASS);
    }

    #[test]
    fn decompose_exterior_two() {
        let out = execute(&parse(&["decompose", "--n", "4", "--rep", "exterior:2", "--sub", "so-full"]));
        assert_eq!(out.code, 0);
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        let dims: Vec<u64> = v["reports"][1]["details"]["pieces"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p["dim"].as_u64().unwrap())
            .collect();
        assert_eq!(dims, vec![3, 3]);
    }

    #[test]
    fn execute_args_reports_usage_errors() {
        let out = execute_args(["weitz", "frobnicate"]);
        assert!(out.error);
        assert_eq!(out.code, EXIT_USAGE);
        let help = execute_args(["weitz", "--help"]);
        assert!(!help.error);
        assert_eq!(help.code, EXIT_PASS);
        assert!(help.text.contains("check"));
    }
}
