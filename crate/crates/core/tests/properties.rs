use std::sync::Arc;

use proptest::prelude::*;
use weitz::curvature::{curvature_from_json, curvature_to_json, random_curvature, random_symmetric, CurvatureOperator};
use weitz::numerics::Matrix;
use weitz::representations::{intertwiners, intertwining_residual, rep_standard, rep_tensor, Rep, StandardKind};
use weitz::selectors::{CurvatureSource, RepSelector};
use weitz::so_algebra::SoBasis;
use weitz::spin::rep_spin;
use weitz::suites::{bochner_residual, lichnerowicz_residual};
use weitz::weitzenbock::{k_matrix, k_term, twisted_term};

fn so(n: usize) -> Arc<SoBasis> {
    Arc::new(SoBasis::new(n).unwrap())
}

fn reps(n: usize) -> Vec<Rep> {
    let b = so(n);
    vec![
        rep_standard(&b, StandardKind::Vector).unwrap(),
        rep_standard(&b, StandardKind::Adjoint).unwrap(),
        rep_standard(&b, StandardKind::Sym0).unwrap(),
        rep_spin(&b).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn k_is_linear_in_curvature(seed in any::<u64>(), n in 3usize..6, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let r1 = random_symmetric(n, seed).unwrap();
        let r2 = random_symmetric(n, seed ^ 0xff).unwrap();
        let mix = CurvatureOperator::combine(alpha, &r1, beta, &r2).unwrap();
        for rep in reps(n) {
            let lhs = k_matrix(&mix, &rep).unwrap();
            let rhs = &k_matrix(&r1, &rep).unwrap().scale_real(alpha) + &k_matrix(&r2, &rep).unwrap().scale_real(beta);
            prop_assert!((&lhs - &rhs).max_abs() <= 1e-12 * (1.0 + lhs.max_abs()), "{}", rep.label());
        }
    }

    #[test]
    fn k_is_self_adjoint(seed in any::<u64>(), n in 2usize..7) {
        let r = random_symmetric(n, seed).unwrap();
        for rep in reps(n) {
            let k = k_term(&r, &rep).unwrap();
            prop_assert!(k.self_adjoint_residual <= 1e-10 * (1.0 + k.matrix.norm_fro()));
            prop_assert!(k.spectrum.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn k_is_natural(seed in any::<u64>(), n in 3usize..6) {
        let b = so(n);
        let v = rep_standard(&b, StandardKind::Vector).unwrap();
        let vv = rep_tensor(&v, &v).unwrap();
        let targets = [
            rep_standard(&b, StandardKind::Exterior(2)).unwrap(),
            rep_standard(&b, StandardKind::Sym(2)).unwrap(),
            rep_standard(&b, StandardKind::Trivial).unwrap(),
        ];
        let r = random_symmetric(n, seed).unwrap();
        let k1 = k_matrix(&r, &vv).unwrap();
        for w in &targets {
            let k2 = k_matrix(&r, w).unwrap();
            let ts = intertwiners(&vv, w).unwrap();
            prop_assert!(!ts.is_empty());
            for t in ts {
                prop_assert!(intertwining_residual(&vv, w, &t) <= 1e-9);
                let lhs = t.matmul(&k1);
                let rhs = k2.matmul(&t);
                prop_assert!((&lhs - &rhs).max_abs() <= 1e-9 * (1.0 + k1.max_abs()));
            }
        }
    }

    #[test]
    fn curvature_json_round_trips(seed in any::<u64>(), n in 2usize..7) {
        let r = random_symmetric(n, seed).unwrap();
        let back = curvature_from_json(&curvature_to_json(&r)).unwrap();
        prop_assert_eq!(back.values(), r.values());
        prop_assert_eq!(back.n(), r.n());
    }

    #[test]
    fn bianchi_projection_is_idempotent(seed in any::<u64>(), n in 3usize..7) {
        let p = random_symmetric(n, seed).unwrap().bianchi_project();
        prop_assert!(p.bianchi_residual() <= 1e-12);
        let pp = p.bianchi_project();
        let d = p.values().iter().zip(pp.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(d <= 1e-12);
    }

    #[test]
    fn twisted_term_scales_with_curvature(seed in any::<u64>(), n in 3usize..5, s in -2.0f64..2.0) {
        let b = so(n);
        let v = rep_standard(&b, StandardKind::Vector).unwrap();
        let spin = rep_spin(&b).unwrap();
        let r = random_curvature(n, seed).unwrap();
        let w1 = twisted_term(&r.scaled(s), &v, &spin).unwrap();
        let w2 = twisted_term(&r, &v, &spin).unwrap().scale_real(s);
        prop_assert!((&w1 - &w2).max_abs() <= 1e-12 * (1.0 + w2.max_abs()));
    }

    #[test]
    fn lichnerowicz_and_bochner_hold_with_bianchi(seed in any::<u64>(), n in 3usize..8) {
        let r = random_curvature(n, seed).unwrap();
        prop_assert!(lichnerowicz_residual(&r).unwrap().0 <= 1e-9);
        prop_assert!(bochner_residual(&r).unwrap() <= 1e-10);
    }

    #[test]
    fn twisted_term_with_trivial_factor(seed in any::<u64>(), n in 3usize..6) {
        let b = so(n);
        let v = rep_standard(&b, StandardKind::Vector).unwrap();
        let triv = rep_standard(&b, StandardKind::Trivial).unwrap();
        let r = random_symmetric(n, seed).unwrap();
        let w = twisted_term(&r, &v, &triv).unwrap();
        let k = k_matrix(&r, &v).unwrap().scale_real(-4.0);
        prop_assert!((&w - &k.kron(&Matrix::identity(1))).max_abs() <= 1e-12 * (1.0 + k.max_abs()));
    }

    #[test]
    fn selectors_round_trip(p in 0usize..5, seed in any::<u64>()) {
        for s in [format!("exterior:{p}"), format!("sym:{p}"), "tensor:vector,sym0,spin".to_string()] {
            let sel: RepSelector = s.parse().unwrap();
            prop_assert_eq!(sel.to_string(), s);
        }
        for s in [format!("random:{seed}"), format!("random-symmetric:{seed}")] {
            let src: CurvatureSource = s.parse().unwrap();
            prop_assert_eq!(src.to_string(), s);
        }
    }
}

#[test]
fn non_bianchi_breaks_lichnerowicz() {
    let exceeding = (0..20)
        .filter(|&s| lichnerowicz_residual(&random_symmetric(4, s).unwrap()).unwrap().0 > 1e-3)
        .count();
    assert!(exceeding >= 19);
}
