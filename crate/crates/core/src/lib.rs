//! Discovery, verification and ranking of fully symmetric quadrature rules
//! on the six standard finite element reference domains.
//!
//! ```
//! use std::time::Duration;
//! use symquad_core::{find_rules, is_pi, select_best, verify_strength, DomainKind, SolverConfig};
//!
//! # fn main() -> symquad_core::Result<()> {
//! let cfg = SolverConfig {
//!     time_budget: Duration::from_secs(5),
//!     max_attempts: Some(50),
//!     rng_seed: 42,
//!     ..SolverConfig::default()
//! };
//! let rules: Vec<_> = find_rules(DomainKind::Tetrahedron, 8, 3, &cfg)
//!     .into_iter()
//!     .filter(is_pi)
//!     .collect();
//! let best = select_best(&rules, 3)?;
//! assert!(verify_strength(best, 3, 1e-10).pass);
//! # Ok(())
//! # }
//! ```

pub mod basis;
pub mod collapsed;
pub mod dd;
pub mod domain;
mod error;
pub mod monomial;
pub mod real;
pub mod rules;
pub mod solver;

pub use basis::{
    basis_integral, objective_indices, ortho_basis_eval, BasisIndex, ObjectiveBasis, OrthoBasis,
};
pub use dd::DoubleDouble;
pub use domain::{
    decomposition_viable, enumerate_decompositions, orbit_catalog, volume, Decomposition, Domain,
    DomainKind, OrbitDescriptor, OrbitInstance, Point,
};
pub use error::{Error, Result};
pub use real::Real;
pub use rules::{
    detect_orbits, is_pi, refine, refine_extended, select_best, truncation_error, verify_strength,
    QuadratureRule, RuleQuality, RuleTerm, StrengthCheck,
};
pub use solver::{
    find_rules, least_squares_weights, levenberg_marquardt, rule_residual, search, seed_orbits,
    CandidateParams, SearchReport, SolverConfig,
};
