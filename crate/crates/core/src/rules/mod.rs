//! Finished quadrature rules: quality measures, ranking and refinement.

mod detect;
pub mod io;
mod refine;

use crate::basis::{basis_integral, OrthoBasis};
use crate::domain::{Decomposition, DomainKind, OrbitInstance, Point, INTERIOR_MARGIN};
use crate::error::{Error, Result};
use crate::real::Real;

pub use detect::detect_orbits;
pub use refine::{refine, refine_extended};

/// One orbit instance and the weight shared by all of its points.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleTerm<T = f64> {
    pub orbit: OrbitInstance<T>,
    pub weight: T,
}

impl<T: Real> RuleTerm<T> {
    pub fn new(orbit: OrbitInstance<T>, weight: T) -> Self {
        RuleTerm { orbit, weight }
    }
}

/// A symmetric quadrature rule stored in orbit form.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule<T = f64> {
    pub kind: DomainKind,
    pub phi: u32,
    pub terms: Vec<RuleTerm<T>>,
    pub point_count: usize,
}

impl<T: Real> QuadratureRule<T> {
    /// Builds a rule, checking orbit ids and parameter arity.
    pub fn new(kind: DomainKind, phi: u32, terms: Vec<RuleTerm<T>>) -> Result<Self> {
        let domain = kind.domain();
        let mut point_count = 0;
        for t in &terms {
            let orbit = domain.orbit(t.orbit.orbit_id)?;
            if t.orbit.params.len() != orbit.param_count {
                return Err(Error::ParamArity {
                    orbit: t.orbit.orbit_id,
                    expected: orbit.param_count,
                    found: t.orbit.params.len(),
                });
            }
            point_count += orbit.point_count;
        }
        Ok(QuadratureRule {
            kind,
            phi,
            terms,
            point_count,
        })
    }

    /// As [`QuadratureRule::new`], additionally checking a declared point
    /// count.
    pub fn with_point_count(
        kind: DomainKind,
        phi: u32,
        terms: Vec<RuleTerm<T>>,
        declared: usize,
    ) -> Result<Self> {
        let rule = Self::new(kind, phi, terms)?;
        if rule.point_count != declared {
            return Err(Error::PointCountMismatch {
                declared,
                actual: rule.point_count,
            });
        }
        Ok(rule)
    }

    /// Multiplicities of each orbit type.
    pub fn decomposition(&self) -> Decomposition {
        let mut mult = vec![0; self.kind.domain().orbits.len()];
        for t in &self.terms {
            mult[t.orbit.orbit_id] += 1;
        }
        Decomposition::new(self.kind, mult)
    }

    /// Orbital parameters of all terms, concatenated.
    pub fn params(&self) -> Vec<T> {
        self.terms
            .iter()
            .flat_map(|t| t.orbit.params.iter().copied())
            .collect()
    }

    /// Expanded points and their weights.
    pub fn expanded(&self) -> (Vec<Point<T>>, Vec<T>) {
        let orbits = &self.kind.domain().orbits;
        let mut pts = Vec::with_capacity(self.point_count);
        let mut wts = Vec::with_capacity(self.point_count);
        for t in &self.terms {
            for p in orbits[t.orbit.orbit_id].expand_raw(&t.orbit.params) {
                pts.push(p);
                wts.push(t.weight);
            }
        }
        (pts, wts)
    }

    pub fn weight_sum(&self) -> T {
        let orbits = &self.kind.domain().orbits;
        let mut s = T::zero();
        for t in &self.terms {
            s += T::from_f64(orbits[t.orbit.orbit_id].point_count as f64) * t.weight;
        }
        s
    }

    /// Converts the scalar type, going through `f64`.
    pub fn convert<U: Real>(&self) -> QuadratureRule<U> {
        QuadratureRule {
            kind: self.kind,
            phi: self.phi,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    RuleTerm::new(
                        OrbitInstance::new(
                            t.orbit.orbit_id,
                            t.orbit
                                .params
                                .iter()
                                .map(|p| U::from_f64(p.to_f64()))
                                .collect(),
                        ),
                        U::from_f64(t.weight.to_f64()),
                    )
                })
                .collect(),
            point_count: self.point_count,
        }
    }

    pub fn to_f64(&self) -> QuadratureRule<f64> {
        self.convert()
    }
}

/// `Σ_k ω_k ψ_i(x_k) − ∫ψ_i` for each index of `basis`.
fn moment_errors<T: Real>(rule: &QuadratureRule<T>, basis: &OrthoBasis<T>) -> Vec<T> {
    let (pts, wts) = rule.expanded();
    let mut acc = vec![T::zero(); basis.len()];
    for (p, &w) in pts.iter().zip(&wts) {
        basis.accumulate(p, w, &mut acc);
    }
    for (a, idx) in acc.iter_mut().zip(basis.indices()) {
        *a -= basis_integral::<T>(rule.kind, idx);
    }
    acc
}

/// Truncation error `ξ(φ')` over the objective basis of degree `phi_prime`.
pub fn truncation_error<T: Real>(rule: &QuadratureRule<T>, phi_prime: u32) -> T {
    let basis = OrthoBasis::<T>::objective(rule.kind, phi_prime);
    let mut s = T::zero();
    for e in moment_errors(rule, &basis) {
        s += e * e;
    }
    s.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrengthCheck {
    pub pass: bool,
    pub max_residual: f64,
}

/// Checks every function of the full orthonormal basis up to degree `phi`.
pub fn verify_strength(rule: &QuadratureRule, phi: u32, tol: f64) -> StrengthCheck {
    let basis = OrthoBasis::<f64>::full(rule.kind, phi);
    let max_residual = moment_errors(rule, &basis)
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max);
    StrengthCheck {
        pass: max_residual <= tol,
        max_residual,
    }
}

/// Positive weights and every point strictly inside the domain.
pub fn is_pi(rule: &QuadratureRule) -> bool {
    let (pts, _) = rule.expanded();
    rule.terms.iter().all(|t| t.weight > 0.0)
        && pts
            .iter()
            .all(|p| rule.kind.boundary_distance(p) > INTERIOR_MARGIN)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RuleQuality {
    pub xi: f64,
    pub xi_next: f64,
    pub is_pi: bool,
    pub min_weight: f64,
    pub min_boundary_distance: f64,
}

impl RuleQuality {
    pub fn assess(rule: &QuadratureRule) -> Self {
        let (pts, _) = rule.expanded();
        let min_weight = rule
            .terms
            .iter()
            .map(|t| t.weight)
            .fold(f64::INFINITY, f64::min);
        let min_boundary_distance = pts
            .iter()
            .map(|p| rule.kind.boundary_distance(p))
            .fold(f64::INFINITY, f64::min);
        RuleQuality {
            xi: truncation_error(rule, rule.phi),
            xi_next: truncation_error(rule, rule.phi + 1),
            is_pi: min_weight > 0.0 && min_boundary_distance > INTERIOR_MARGIN,
            min_weight,
            min_boundary_distance,
        }
    }
}

/// Two `ξ` values closer than this (relative to `max(1, ξ)`) are tied.
const TIE_TOLERANCE: f64 = 1e-15;

/// The rule with the smallest `ξ(φ + 1)`; ties go to the earliest.
pub fn select_best(rules: &[QuadratureRule], phi: u32) -> Result<&QuadratureRule> {
    let mut best: Option<(usize, f64)> = None;
    for (i, r) in rules.iter().enumerate() {
        let xi = truncation_error(r, phi + 1);
        match best {
            Some((_, b)) if xi >= b - TIE_TOLERANCE * b.max(1.0) => {}
            _ => best = Some((i, xi)),
        }
    }
    best.map(|(i, _)| &rules[i]).ok_or(Error::EmptyEnsemble)
}
