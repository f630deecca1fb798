//! Fixtures shared by the `pipeline` benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symquad_core::solver::RuleResidual;
use symquad_core::{seed_orbits, Decomposition, DomainKind, Point, SolverConfig};

/// A residual evaluator with one seeded parameter vector.
pub struct Problem {
    pub residual: RuleResidual,
    pub params: Vec<f64>,
}

/// Strength 5 on eight quadrilateral points.
pub fn quad_problem() -> Problem {
    problem(DomainKind::Quadrilateral, 5, vec![0, 1, 1, 0])
}

/// Strength 7 on 35 tetrahedron points.
pub fn tet_problem() -> Problem {
    // 1 + 4 + 6 + 2 · 12 points.
    problem(DomainKind::Tetrahedron, 7, vec![1, 1, 1, 2, 0])
}

pub fn problem(kind: DomainKind, phi: u32, multiplicities: Vec<usize>) -> Problem {
    let d = Decomposition::new(kind, multiplicities);
    let params = seed_orbits(kind, &d, &mut ChaCha8Rng::seed_from_u64(0)).params;
    Problem {
        residual: RuleResidual::new(kind, phi, d),
        params,
    }
}

/// Interior sample points for basis evaluation.
pub fn sample_points(kind: DomainKind, n: usize) -> Vec<Point> {
    let (pts, _) = symquad_core::collapsed::collapsed_rule(kind, n);
    pts
}

/// A single-attempt configuration, so a search measures one minimization
/// per viable decomposition.
pub fn one_attempt() -> SolverConfig {
    SolverConfig {
        max_attempts: Some(1),
        ..SolverConfig::default()
    }
}
