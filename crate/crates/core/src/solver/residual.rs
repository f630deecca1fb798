//! Residual of the objective-basis moment equations with the weights
//! eliminated by least squares.

use nalgebra::{DMatrix, DVector};

use super::lstsq::least_squares_weights;
use crate::basis::{basis_integral, OrthoBasis};
use crate::domain::{Decomposition, DomainKind, OrbitInstance};
use crate::real::Real;

/// Flat parameter vector of a decomposition, one block of `⟦S_j⟧` values
/// per orbit instance in decomposition order.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateParams<T = f64> {
    pub decomposition: Decomposition,
    pub params: Vec<T>,
}

impl<T: Real> CandidateParams<T> {
    pub fn new(decomposition: Decomposition, params: Vec<T>) -> Self {
        CandidateParams {
            decomposition,
            params,
        }
    }

    /// Splits the flat vector into orbit instances.
    pub fn instances(&self, kind: DomainKind) -> Vec<OrbitInstance<T>> {
        split_instances(kind, &self.decomposition, &self.params)
    }
}

pub(crate) fn split_instances<T: Real>(
    kind: DomainKind,
    d: &Decomposition,
    params: &[T],
) -> Vec<OrbitInstance<T>> {
    let orbits = &kind.domain().orbits;
    let mut offset = 0;
    d.instances()
        .map(|id| {
            let k = orbits[id].param_count;
            let inst = OrbitInstance::new(id, params[offset..offset + k].to_vec());
            offset += k;
            inst
        })
        .collect()
}

/// Clamps every instance block of `params` in place.
pub fn clamp_params<T: Real>(kind: DomainKind, d: &Decomposition, params: &mut [T]) {
    let orbits = &kind.domain().orbits;
    let mut offset = 0;
    for id in d.instances() {
        let k = orbits[id].param_count;
        orbits[id].clamp_in_place(&mut params[offset..offset + k]);
        offset += k;
    }
}

/// Column `j` holds `Σ_k ψ_i(x_k)` over the points of instance `j`.
pub(crate) fn moment_columns<T: Real>(
    basis: &OrthoBasis<T>,
    instances: &[OrbitInstance<T>],
) -> Vec<Vec<T>> {
    let orbits = &basis.kind().domain().orbits;
    instances
        .iter()
        .map(|inst| {
            let mut col = vec![T::zero(); basis.len()];
            for p in orbits[inst.orbit_id].expand_raw(&inst.params) {
                basis.accumulate(&p, T::one(), &mut col);
            }
            col
        })
        .collect()
}

pub(crate) fn moment_targets<T: Real>(basis: &OrthoBasis<T>) -> Vec<T> {
    basis
        .indices()
        .iter()
        .map(|idx| basis_integral::<T>(basis.kind(), idx))
        .collect()
}

/// Reusable residual evaluator for one domain, strength and decomposition.
#[derive(Clone, Debug)]
pub struct RuleResidual {
    pub kind: DomainKind,
    pub phi: u32,
    pub decomposition: Decomposition,
    basis: OrthoBasis<f64>,
    targets: DVector<f64>,
}

impl RuleResidual {
    pub fn new(kind: DomainKind, phi: u32, decomposition: Decomposition) -> Self {
        let basis = OrthoBasis::objective(kind, phi);
        let targets = DVector::from_vec(moment_targets(&basis));
        RuleResidual {
            kind,
            phi,
            decomposition,
            basis,
            targets,
        }
    }

    pub fn param_count(&self) -> usize {
        self.decomposition.param_count(self.kind)
    }

    pub fn equation_count(&self) -> usize {
        self.basis.len()
    }

    /// Clamped copy of `params`.
    pub fn clamped(&self, params: &[f64]) -> Vec<f64> {
        let mut p = params.to_vec();
        clamp_params(self.kind, &self.decomposition, &mut p);
        p
    }

    /// Moment matrix at the clamped parameters.
    pub fn matrix(&self, params: &[f64]) -> DMatrix<f64> {
        let p = self.clamped(params);
        let instances = split_instances(self.kind, &self.decomposition, &p);
        let cols = moment_columns(&self.basis, &instances);
        DMatrix::from_fn(self.basis.len(), cols.len(), |i, j| cols[j][i])
    }

    pub fn targets(&self) -> &DVector<f64> {
        &self.targets
    }

    /// Returns `(Aω − b, ω)` with `ω` the minimum-norm least-squares weights.
    pub fn evaluate(&self, params: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let a = self.matrix(params);
        let w = least_squares_weights(&a, &self.targets);
        (&a * &w - &self.targets, w)
    }
}

/// Residual and eliminated weights of a candidate at strength `phi`.
pub fn rule_residual(
    kind: DomainKind,
    phi: u32,
    cand: &CandidateParams,
) -> (DVector<f64>, DVector<f64>) {
    RuleResidual::new(kind, phi, cand.decomposition.clone()).evaluate(&cand.params)
}
