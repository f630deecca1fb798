use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symquad_core::monomial::max_monomial_error;
use symquad_core::solver::{forward_jacobian, levenberg_marquardt_projected, RuleResidual};
use symquad_core::{
    enumerate_decompositions, find_rules, levenberg_marquardt, rule_residual, seed_orbits,
    verify_strength, CandidateParams, Decomposition, DomainKind, SolverConfig,
};

use DomainKind::*;

fn capped(attempts: usize, seed: u64) -> SolverConfig {
    SolverConfig {
        time_budget: Duration::from_secs(60),
        max_attempts: Some(attempts),
        rng_seed: seed,
        ..SolverConfig::default()
    }
}

#[test]
fn dof_accounting() {
    for kind in DomainKind::ALL {
        let orbits = &kind.domain().orbits;
        for np in 1..=30 {
            for d in enumerate_decompositions(kind, np) {
                let params: usize = d
                    .multiplicities
                    .iter()
                    .zip(orbits)
                    .map(|(n, o)| n * o.param_count)
                    .sum();
                let full: usize = d
                    .multiplicities
                    .iter()
                    .zip(orbits)
                    .map(|(n, o)| n * (o.param_count + 1))
                    .sum();
                assert_eq!(d.param_count(kind), params);
                assert_eq!(d.full_dof(kind), full);
                let mut rng = ChaCha8Rng::seed_from_u64(np as u64);
                assert_eq!(seed_orbits(kind, &d, &mut rng).params.len(), params);
            }
        }
    }
}

#[test]
fn forward_jacobian_agrees_with_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases = [
        (Triangle, 4, vec![1, 1, 1]),
        (Quadrilateral, 5, vec![0, 1, 1, 1]),
        (Tetrahedron, 3, vec![0, 1, 1, 0, 0]),
        (Prism, 3, vec![0, 1, 1, 1, 0, 0]),
        (Pyramid, 3, vec![1, 0, 1, 0]),
        (Hexahedron, 5, vec![0, 1, 1, 0, 0, 0, 0]),
    ];
    let h = f64::EPSILON.sqrt();
    for (kind, phi, mult) in cases {
        let res = RuleResidual::new(kind, phi, Decomposition::new(kind, mult));
        for _ in 0..20 {
            let x = seed_orbits(kind, &res.decomposition, &mut rng).params;
            let f = |p: &[f64]| Ok(res.evaluate(p).0.as_slice().to_vec());
            let fwd = forward_jacobian(f, &x, h).unwrap();
            let central = nalgebra::DMatrix::from_fn(res.equation_count(), x.len(), |i, j| {
                let step = 0.5 * h * (1.0 + x[j].abs());
                let (mut a, mut b) = (x.clone(), x.clone());
                a[j] += step;
                b[j] -= step;
                (res.evaluate(&a).0[i] - res.evaluate(&b).0[i]) / (2.0 * step)
            });
            let rel = (&fwd - &central).norm() / central.norm().max(1e-300);
            assert!(rel <= 1e-4, "{kind:?} {rel}");
        }
    }
}

#[test]
fn lm_steps_respect_the_damping_schedule() {
    let cfg = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let kind = Triangle;
    let res = RuleResidual::new(kind, 5, Decomposition::new(kind, vec![1, 2, 0]));
    for _ in 0..20 {
        let x0 = seed_orbits(kind, &res.decomposition, &mut rng).params;
        let out = levenberg_marquardt_projected(
            |p: &[f64]| Ok(res.evaluate(p).0.as_slice().to_vec()),
            |p: &mut [f64]| symquad_core::solver::clamp_params(kind, &res.decomposition, p),
            &x0,
            &cfg,
        )
        .unwrap();
        for w in out.steps.windows(2) {
            let (a, b) = (w[0], w[1]);
            let expected = if a.accepted {
                a.damping / cfg.damping_growth
            } else {
                a.damping * cfg.damping_growth
            };
            assert!((b.damping - expected).abs() <= 1e-12 * expected);
            if a.accepted {
                assert_eq!(b.xi_before, a.xi_trial);
            } else {
                assert_eq!(b.xi_before, a.xi_before);
            }
        }
        for s in &out.steps {
            assert_eq!(s.accepted, s.xi_trial < s.xi_before);
        }
        let accepted: Vec<f64> = out
            .steps
            .iter()
            .filter(|s| s.accepted)
            .map(|s| s.xi_trial)
            .collect();
        assert!(accepted.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn zero_parameter_problem_needs_only_weights() {
    let d = Decomposition::new(Triangle, vec![1, 0, 0]);
    let res = RuleResidual::new(Triangle, 1, d);
    let out = levenberg_marquardt(
        |p: &[f64]| Ok(res.evaluate(p).0.as_slice().to_vec()),
        &[],
        &SolverConfig::default(),
    )
    .unwrap();
    assert!(out.xi <= 1e-12);
}

#[test]
fn single_centroid_rule() {
    let rules = find_rules(Triangle, 1, 1, &SolverConfig::default());
    assert_eq!(rules.len(), 1);
    assert_eq!(rules[0].terms.len(), 1);
    assert_eq!(rules[0].terms[0].orbit.orbit_id, 0);
    assert!((rules[0].terms[0].weight - 2.0).abs() < 1e-12);
}

#[test]
fn tensor_gauss_rule_is_found() {
    let rules = find_rules(Quadrilateral, 4, 3, &capped(30, 1));
    let alpha = 1.0 / 3f64.sqrt();
    assert!(rules.iter().any(|r| {
        r.terms.len() == 1
            && r.terms[0].orbit.orbit_id == 2
            && (r.terms[0].orbit.params[0] - alpha).abs() < 1e-8
            && (r.terms[0].weight - 1.0).abs() < 1e-8
    }));
}

#[test]
fn forty_four_triangle_points_have_no_rules() {
    for phi in 1..=6 {
        assert!(find_rules(Triangle, 44, phi, &SolverConfig::default()).is_empty());
    }
}

#[test]
fn collinear_prism_points_cannot_reach_strength_two() {
    // Forty pairs on the axis through the triangle centroid: the x² mode has
    // a positive integral that no weights reproduce.
    let kind = Prism;
    let d = Decomposition::new(kind, vec![0, 40, 0, 0, 0, 0]);
    assert_eq!(d.point_count, 80);
    let res = RuleResidual::new(kind, 2, d.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut best = f64::INFINITY;
    for _ in 0..10 {
        let x0 = seed_orbits(kind, &d, &mut rng).params;
        best = best.min(res.evaluate(&x0).0.norm());
        let out = levenberg_marquardt_projected(
            |p: &[f64]| Ok(res.evaluate(p).0.as_slice().to_vec()),
            |p: &mut [f64]| symquad_core::solver::clamp_params(kind, &d, p),
            &x0,
            &SolverConfig::default(),
        )
        .unwrap();
        best = best.min(out.xi);
    }
    assert!(best > 0.1, "{best}");
    let (r, _) = rule_residual(kind, 2, &CandidateParams::new(d, vec![0.5; 40]));
    assert!(r.norm() > 0.1);
}

#[test]
fn found_rules_are_inside_and_exact() {
    let cases = [
        (Triangle, 4, 6),
        (Quadrilateral, 5, 8),
        (Tetrahedron, 3, 8),
        (Prism, 3, 8),
        (Pyramid, 3, 6),
        (Hexahedron, 3, 14),
    ];
    for (kind, phi, np) in cases {
        let rules = find_rules(kind, np, phi, &capped(20, 2));
        assert!(!rules.is_empty(), "{kind:?}");
        for rule in &rules {
            let (pts, wts) = rule.expanded();
            assert_eq!(pts.len(), np);
            assert!(pts.iter().all(|p| kind.boundary_distance(p) >= 0.0));
            assert!(verify_strength(rule, phi, 1e-10).pass);
            assert!(max_monomial_error(kind, &pts, &wts, phi) <= 1e-10);
            assert!((rule.weight_sum() - kind.volume()).abs() <= 1e-10);

            // Re-solving the weights from the frozen points gives them back.
            let cand = CandidateParams::new(rule.decomposition(), rule.params());
            let (_, w) = rule_residual(kind, phi, &cand);
            for (t, w) in rule.terms.iter().zip(w.iter()) {
                assert!((t.weight - w).abs() <= 1e-12, "{kind:?}");
            }
        }
    }
}

#[test]
fn seeded_search_is_reproducible() {
    let a = find_rules(Pyramid, 6, 3, &capped(25, 8));
    let b = find_rules(Pyramid, 6, 3, &capped(25, 8));
    assert_eq!(a, b);
    let c = find_rules(Pyramid, 6, 3, &capped(25, 9));
    assert!(!c.is_empty());
}
