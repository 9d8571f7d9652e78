//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use weitz::numerics::Matrix;
use weitz::report::CheckReport;
use weitz::representations::{
    isotypic_decompose, rep_restrict, rep_standard, rep_tensor, Rep, StandardKind, HOMOMORPHISM_TOL,
};
use weitz::so_algebra::{full_subalgebra, so_diag_subalgebra, u_subalgebra, SoBasis};
use weitz::spin::{gamma_matrices, rep_half_spin, rep_spin};
use weitz::suites::{run_suite, Suite, SuiteConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn suite(s: Suite) -> Vec<CheckReport> {
    run_suite(s, &SuiteConfig::seeded(0)).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn named<'a>(reports: &'a [CheckReport], name: &str) -> Vec<&'a CheckReport> {
    reports.iter().filter(|r| r.check == name).collect()
}

fn worst(reports: &[&CheckReport]) -> f64 {
    reports.iter().map(|r| r.residual).fold(0.0, f64::max)
}

fn all_within(reports: &[&CheckReport], tol: f64) -> bool {
    !reports.is_empty() && reports.iter().all(|r| r.pass && r.residual <= tol)
}

fn ns_of(reports: &[&CheckReport]) -> BTreeSet<u64> {
    reports.iter().filter_map(|r| r.details["n"].as_u64()).collect()
}

fn lichnerowicz() -> Outcome {
    let reps = suite(Suite::Lichnerowicz);
    let trials = named(&reps, "lichnerowicz");
    let control = named(&reps, "lichnerowicz:control");
    let ns_ok = ns_of(&trials) == (3..=8).collect();
    let per_n = (3..=8).all(|n| trials.iter().filter(|r| r.details["n"] == n).count() == 20);
    let bianchi = trials.iter().all(|r| r.details["bianchi"] == true);
    let exceeding = control.first().and_then(|c| c.details["exceeding"].as_u64()).unwrap_or(0);
    let pass = ns_ok && per_n && bianchi && all_within(&trials, 1e-9) && control.len() == 1 && exceeding >= 95;
    outcome(
        pass,
        format!(
            "{} trials n=3..8, max relative residual {:.2e}; control {exceeding}/100 exceed 1e-3",
            trials.len(),
            worst(&trials)
        ),
    )
}

fn bochner() -> Outcome {
    let reps = suite(Suite::Bochner);
    let trials = named(&reps, "bochner");
    let lich = suite(Suite::Lichnerowicz);
    let same: Vec<&String> = named(&lich, "lichnerowicz").iter().map(|r| &r.inputs.digests["curvature"]).collect();
    let ours: Vec<&String> = trials.iter().map(|r| &r.inputs.digests["curvature"]).collect();
    let pass = trials.len() == 120 && same == ours && all_within(&trials, 1e-10);
    outcome(pass, format!("{} trials (same curvatures as criterion 1), max residual {:.2e}", trials.len(), worst(&trials)))
}

fn sphere_casimir() -> Outcome {
    let reps = suite(Suite::SphereCasimir);
    let entries = named(&reps, "sphere-casimir");
    let weights = named(&reps, "sphere-casimir:weight");
    let ns_ok = ns_of(&entries) == (2..=6).collect() && ns_of(&weights) == (3..=6).collect();
    let per_weight_n = (3..=6).all(|n| weights.iter().filter(|r| r.details["n"] == n).count() == 3);
    let pass = ns_ok && per_weight_n && all_within(&entries, 1e-12) && all_within(&weights, 1e-9);
    outcome(
        pass,
        format!(
            "{} family entries n=2..6, max entry deviation {:.2e}; {} weight checks, max {:.2e}",
            entries.len(),
            worst(&entries),
            weights.len(),
            worst(&weights)
        ),
    )
}

fn strange() -> Outcome {
    let reps = suite(Suite::Strange);
    // ‖δ‖² = dim/24 written in lowest terms
    let want = [
        ("A1", "1/8"),
        ("A2", "1/3"),
        ("B2", "5/12"),
        ("C3", "7/8"),
        ("D4", "7/6"),
        ("G2", "7/12"),
    ];
    let mut ok = reps.len() == want.len();
    for (alg, norm) in want {
        let found = reps.iter().find(|r| r.details["algebra"] == alg);
        ok &= found.is_some_and(|r| r.pass && r.details["exact"] == true && r.details["delta_norm_sq"] == norm);
    }
    outcome(ok, "A1 A2 B2 C3 D4 G2: dim g = 24‖δ‖² exactly in rational arithmetic")
}

fn group_model() -> Outcome {
    let reps = suite(Suite::GroupModel);
    let ricci: Vec<&CheckReport> = reps.iter().filter(|r| r.check.starts_with("group-model:ricci:")).collect();
    let spin_a1 = named(&reps, "group-model:spin:A1");
    let scalars_ok = ricci.iter().all(|r| {
        let dim = r.details["dim"].as_f64().unwrap();
        (r.details["scalar"].as_f64().unwrap() - dim / 4.0).abs() <= 1e-10
    });
    let pass = ricci.len() == 2 && scalars_ok && all_within(&ricci, 1e-10) && all_within(&spin_a1, 1e-9);
    outcome(
        pass,
        format!(
            "A1, A2 Ricci = I/4, s = dim/4 (max {:.2e}); A1 spin term = (3/16)·I ({:.2e})",
            worst(&ricci),
            worst(&spin_a1)
        ),
    )
}

fn lemma() -> Outcome {
    let k2 = suite(Suite::LemmaK2);
    let k4 = suite(Suite::LemmaK4);
    let k2r: Vec<&CheckReport> = k2.iter().collect();
    let k4r: Vec<&CheckReport> = k4.iter().collect();
    let shapes = k2r.iter().all(|r| r.details["n"] == 3 && r.details["subspace_dim"] == 3)
        && k4r.iter().all(|r| r.details["n"] == 4 && r.details["ambient_dim"] == 256 && r.details["t"] == -1.0);
    let pass = k2.len() == 20 && k4.len() == 20 && shapes && all_within(&k2r, 1e-8) && all_within(&k4r, 1e-8);
    outcome(
        pass,
        format!(
            "k=2 Sym²V n=3: max {:.2e}; k=4 J⊗J·Sym²Λ² in 256 dims: max {:.2e}",
            worst(&k2r),
            worst(&k4r)
        ),
    )
}

fn positivity() -> Outcome {
    let reps = suite(Suite::Positivity);
    let main = named(&reps, "positivity");
    let mut ok = main.len() == 400 && ns_of(&main).is_empty();
    let mut min_seen = f64::INFINITY;
    for r in &main {
        let d = &r.details;
        ok &= r.pass && !r.diagnostic && d["curvature_positive"] == true && d["forward"] == true;
        for e in d["entries"].as_array().unwrap() {
            if e["irreducible"] == true && e["trivial"] == false {
                let m = e["min_neg_k"].as_f64().unwrap();
                min_seen = min_seen.min(m);
                ok &= m > 0.0;
            }
        }
    }
    let per_n = [3usize, 4, 5, 6].iter().all(|&n| {
        main.iter().filter(|r| r.details["entries"][0]["dim"].as_u64() == Some(n as u64)).count() == 100
    });
    outcome(
        ok && per_n,
        format!("400 positive curvatures n=3..6: smallest eigenvalue of −K on irreducibles {min_seen:.3e}"),
    )
}

fn blocks4() -> Outcome {
    let reps = suite(Suite::Blocks4);
    let iff = named(&reps, "blocks4:iff");
    let ratio = named(&reps, "blocks4:ratio");
    let einstein = iff.iter().filter(|r| r.details["ratio"].is_null()).count();
    let mut ok = iff.len() == 100 && iff.iter().all(|r| r.pass) && einstein > 0 && einstein < 100;
    for r in &iff {
        let mixed = r.details["mixed_norm"].as_f64().unwrap();
        let ric0 = r.details["traceless_ricci_norm"].as_f64().unwrap();
        ok &= (mixed <= 1e-9) == (ric0 <= 1e-9);
    }
    let constant = ratio.first().map(|r| r.details["constant"].as_f64().unwrap()).unwrap_or(f64::NAN);
    ok &= ratio.len() == 1 && all_within(&ratio, 1e-6);
    outcome(
        ok,
        format!(
            "100 trials ({einstein} Einstein): mixed block vanishes iff Ric₀ = 0; ‖mixed‖/‖Ric₀‖ = {constant:.12} (spread {:.2e})",
            worst(&ratio)
        ),
    )
}

fn structural() -> Outcome {
    let mut hom: f64 = 0.0;
    for n in 2..=6 {
        let b = Arc::new(SoBasis::new(n).unwrap());
        let mut reps: Vec<Rep> = [
            StandardKind::Trivial,
            StandardKind::Vector,
            StandardKind::Adjoint,
            StandardKind::Exterior(2),
            StandardKind::Sym(2),
            StandardKind::Sym0,
        ]
        .into_iter()
        .map(|k| rep_standard(&b, k).unwrap())
        .collect();
        reps.push(rep_spin(&b).unwrap());
        if n % 2 == 0 {
            reps.push(rep_half_spin(&b, true).unwrap());
            reps.push(rep_half_spin(&b, false).unwrap());
        }
        reps.push(rep_tensor(&reps[1], &reps[6]).unwrap());
        for r in &reps {
            hom = hom.max(r.homomorphism_residual());
        }
    }

    let mut cliff: f64 = 0.0;
    for n in 2..=8 {
        let g = gamma_matrices(n).unwrap();
        let d = g[0].rows();
        for i in 0..n {
            for j in 0..n {
                let anti = &g[i].matmul(&g[j]) + &g[j].matmul(&g[i]);
                let want = if i == j { Matrix::identity(d).scale_real(-2.0) } else { Matrix::zeros(d, d) };
                cliff = cliff.max((&anti - &want).max_abs());
            }
        }
    }

    let mut proj: f64 = 0.0;
    let cases: Vec<(usize, StandardKind, Arc<weitz::so_algebra::Subalgebra>)> = vec![
        (4, StandardKind::Exterior(2), Arc::new(full_subalgebra(4).unwrap())),
        (4, StandardKind::Exterior(2), Arc::new(u_subalgebra(2).unwrap())),
        (6, StandardKind::Vector, Arc::new(u_subalgebra(3).unwrap())),
        (5, StandardKind::Sym0, Arc::new(so_diag_subalgebra(5, 2).unwrap())),
        (3, StandardKind::Sym(2), Arc::new(full_subalgebra(3).unwrap())),
    ];
    for (n, kind, h) in cases {
        let r = rep_restrict(&rep_standard(&Arc::new(SoBasis::new(n).unwrap()), kind).unwrap(), &h).unwrap();
        let pieces = isotypic_decompose(&r, 1).unwrap();
        let d = r.dim();
        let mut sum = Matrix::zeros(d, d);
        for (i, p) in pieces.iter().enumerate() {
            sum += &p.projector;
            proj = proj.max((&p.projector.matmul(&p.projector) - &p.projector).max_abs());
            for q in &pieces[i + 1..] {
                proj = proj.max(p.projector.matmul(&q.projector).max_abs());
            }
        }
        proj = proj.max((&sum - &Matrix::identity(d)).max_abs());
    }

    let runs: [&[&str]; 3] = [
        &["check", "lichnerowicz", "--n", "4,6", "--trials", "4", "--seed", "3"],
        &["k", "--n", "5", "--rep", "tensor:vector,spin", "--curvature", "random:12", "--t", "hodge"],
        &["decompose", "--n", "4", "--rep", "exterior:2", "--sub", "u:2"],
    ];
    let deterministic = runs.iter().all(|args| {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_weitz"))
                .args(*args)
                .env_remove("WEITZ_TOLERANCE")
                .env_remove("WEITZ_CI")
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        a.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout
    });

    let pass = hom <= HOMOMORPHISM_TOL && cliff <= 1e-12 && proj <= 1e-10 && deterministic;
    outcome(
        pass,
        format!(
            "homomorphism {hom:.2e}, Clifford {cliff:.2e}, projectors {proj:.2e}, byte-identical CLI reruns: {deterministic}"
        ),
    )
}

#[test]
fn acceptance_criteria() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 9] = [
        ("1 lichnerowicz", lichnerowicz, Duration::from_secs(30)),
        ("2 bochner", bochner, Duration::from_secs(5)),
        ("3 sphere-casimir", sphere_casimir, Duration::MAX),
        ("4 strange", strange, Duration::from_secs(1)),
        ("5 group-model", group_model, Duration::MAX),
        ("6 lemma", lemma, Duration::from_secs(120)),
        ("7 positivity", positivity, Duration::MAX),
        ("8 blocks4", blocks4, Duration::MAX),
        ("9 structural", structural, Duration::MAX),
    ];
    let mut failed = Vec::new();
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = o.pass && in_time;
        let budget = if limit == Duration::MAX {
            String::new()
        } else {
            format!(" (limit {}s)", limit.as_secs())
        };
        println!(
            "{} criterion {name}: {} [{:.2}s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64()
        );
        if !pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
