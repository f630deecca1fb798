use thiserror::Error;

use crate::domain::DomainKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("orbit {orbit} does not exist on the {domain}")]
    UnknownOrbit { domain: DomainKind, orbit: usize },

    #[error("orbit {orbit} expects {expected} parameter(s), got {found}")]
    ParamArity {
        orbit: usize,
        expected: usize,
        found: usize,
    },

    #[error("orbit {orbit} with parameters {params:?} collapses to fewer than {expected} distinct points")]
    DegenerateOrbit {
        orbit: usize,
        params: Vec<f64>,
        expected: usize,
    },

    #[error("residual evaluation produced a non-finite value")]
    NonFiniteResidual,

    #[error("cannot select from an empty ensemble")]
    EmptyEnsemble,

    #[error("refinement diverged: truncation error grew from {before:e} to {after:e}")]
    RefinementDiverged { before: f64, after: f64 },

    #[error("rule declares {declared} points but its orbits expand to {actual}")]
    PointCountMismatch { declared: usize, actual: usize },

    #[error("point {point} has no symmetric partner with a matching weight")]
    Unsymmetric { point: usize },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
