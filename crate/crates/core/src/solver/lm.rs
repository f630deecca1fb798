//! Levenberg–Marquardt with a forward-difference Jacobian.

use nalgebra::{DMatrix, DVector};

use super::SolverConfig;
use crate::error::{Error, Result};

/// Damping beyond this multiple of the initial curvature scale counts as
/// overflow.
const DAMPING_CEILING: f64 = 1e16;

/// Steps shorter than this relative to `‖x‖` count as a stall.
const STEP_FLOOR: f64 = 4.0 * f64::EPSILON;

/// Iterations over which the residual must shrink by `PROGRESS_FACTOR`.
const PROGRESS_WINDOW: usize = 30;
const PROGRESS_FACTOR: f64 = 0.999;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Converged,
    DampingOverflow,
    MaxIterations,
    Stalled,
}

/// One trial step.
#[derive(Clone, Copy, Debug)]
pub struct LmStep {
    pub xi_before: f64,
    pub xi_trial: f64,
    pub damping: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    pub residual: Vec<f64>,
    pub xi: f64,
    pub termination: Termination,
    pub steps: Vec<LmStep>,
    pub evaluations: usize,
}

fn norm(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn checked(r: Vec<f64>) -> Result<Vec<f64>> {
    if r.iter().all(|v| v.is_finite()) {
        Ok(r)
    } else {
        Err(Error::NonFiniteResidual)
    }
}

/// Forward-difference Jacobian with step `h_scale · (1 + |x_i|)`.
pub fn forward_jacobian<F>(mut f: F, x: &[f64], h_scale: f64) -> Result<DMatrix<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let r0 = checked(f(x)?)?;
    jacobian_projected(&mut f, &|_: &mut [f64]| {}, x, &r0, h_scale)
}

/// Column `i` uses the projected forward point; when projection pins the
/// coordinate (a bound is active) the backward point is used instead.
fn jacobian_projected<F, P>(
    f: &mut F,
    project: &P,
    x: &[f64],
    r0: &[f64],
    h_scale: f64,
) -> Result<DMatrix<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
    P: Fn(&mut [f64]) + ?Sized,
{
    let mut jac = DMatrix::zeros(r0.len(), x.len());
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        let h = h_scale * (1.0 + x[i].abs());
        let mut delta = 0.0;
        for dir in [1.0, -1.0] {
            xp.copy_from_slice(x);
            xp[i] += dir * h;
            project(&mut xp);
            delta = xp[i] - x[i];
            if delta != 0.0 {
                break;
            }
        }
        if delta == 0.0 {
            continue;
        }
        let rp = checked(f(&xp)?)?;
        for (row, (a, b)) in rp.iter().zip(r0).enumerate() {
            jac[(row, i)] = (a - b) / delta;
        }
    }
    Ok(jac)
}

/// Minimizes `‖f(x)‖` starting from `x0`.
pub fn levenberg_marquardt<F>(f: F, x0: &[f64], cfg: &SolverConfig) -> Result<LmOutcome>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    levenberg_marquardt_projected(f, |_: &mut [f64]| {}, x0, cfg)
}

/// As [`levenberg_marquardt`], keeping every iterate on the image of
/// `project`.
pub fn levenberg_marquardt_projected<F, P>(
    mut f: F,
    project: P,
    x0: &[f64],
    cfg: &SolverConfig,
) -> Result<LmOutcome>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
    P: Fn(&mut [f64]),
{
    let n = x0.len();
    let mut x = x0.to_vec();
    project(&mut x);
    let mut r = checked(f(&x)?)?;
    let mut xi = norm(&r);
    let mut evaluations = 1;
    let mut steps = Vec::new();

    let finish = |x, r, xi, termination, steps, evaluations| {
        Ok(LmOutcome {
            x,
            residual: r,
            xi,
            termination,
            steps,
            evaluations,
        })
    };

    if xi <= cfg.success_threshold {
        return finish(x, r, xi, Termination::Converged, steps, evaluations);
    }
    if n == 0 {
        return finish(x, r, xi, Termination::Stalled, steps, evaluations);
    }

    let mut jac = jacobian_projected(&mut f, &project, &x, &r, cfg.fd_step_scale)?;
    evaluations += n;
    let mut jtj = jac.tr_mul(&jac);
    let mut grad = jac.tr_mul(&DVector::from_column_slice(&r));
    let scale = jtj.diagonal().max();
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let mut mu = cfg.initial_damping * scale;
    let ceiling = DAMPING_CEILING * scale;
    let mut recent = vec![xi];

    for _ in 0..cfg.max_iterations {
        let mut lhs = jtj.clone();
        for d in 0..n {
            lhs[(d, d)] += mu;
        }
        let Some(chol) = lhs.cholesky() else {
            mu *= cfg.damping_growth;
            if mu > ceiling {
                return finish(x, r, xi, Termination::DampingOverflow, steps, evaluations);
            }
            continue;
        };
        let step = -chol.solve(&grad);
        let xnorm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if step.norm() <= STEP_FLOOR * (xnorm + STEP_FLOOR) {
            return finish(x, r, xi, Termination::Stalled, steps, evaluations);
        }

        let mut trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        project(&mut trial);
        let rt = checked(f(&trial)?)?;
        evaluations += 1;
        let xt = norm(&rt);
        let accepted = xt < xi;
        steps.push(LmStep {
            xi_before: xi,
            xi_trial: xt,
            damping: mu,
            accepted,
        });

        if accepted {
            x = trial;
            r = rt;
            xi = xt;
            mu /= cfg.damping_growth;
            if xi <= cfg.success_threshold {
                return finish(x, r, xi, Termination::Converged, steps, evaluations);
            }
            jac = jacobian_projected(&mut f, &project, &x, &r, cfg.fd_step_scale)?;
            evaluations += n;
            jtj = jac.tr_mul(&jac);
            grad = jac.tr_mul(&DVector::from_column_slice(&r));
        } else {
            mu *= cfg.damping_growth;
            if mu > ceiling {
                return finish(x, r, xi, Termination::DampingOverflow, steps, evaluations);
            }
        }

        recent.push(xi);
        if recent.len() > PROGRESS_WINDOW {
            let old = recent.remove(0);
            if xi > PROGRESS_FACTOR * old {
                return finish(x, r, xi, Termination::Stalled, steps, evaluations);
            }
        }
    }
    finish(x, r, xi, Termination::MaxIterations, steps, evaluations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_linear() {
        let cfg = SolverConfig {
            success_threshold: 1e-15,
            ..SolverConfig::default()
        };
        let out = levenberg_marquardt(|x: &[f64]| Ok(vec![x[0] - 3.0]), &[0.0], &cfg).unwrap();
        assert!((out.x[0] - 3.0).abs() < 1e-12);
        assert!(out.xi <= 1e-14);
        assert_eq!(out.termination, Termination::Converged);
    }

    #[test]
    fn constant_residual_stalls() {
        let cfg = SolverConfig::default();
        let out = levenberg_marquardt(|_: &[f64]| Ok(vec![1.0]), &[0.5], &cfg).unwrap();
        assert_eq!(out.xi, 1.0);
        assert_eq!(out.termination, Termination::Stalled);
    }

    #[test]
    fn rosenbrock() {
        let cfg = SolverConfig {
            max_iterations: 2000,
            ..SolverConfig::default()
        };
        let f = |x: &[f64]| Ok(vec![10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]]);
        let out = levenberg_marquardt(f, &[-1.2, 1.0], &cfg).unwrap();
        assert!(out.xi <= cfg.success_threshold, "{out:?}");
        assert!((out.x[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn non_finite_is_an_error() {
        let cfg = SolverConfig::default();
        let err = levenberg_marquardt(|x: &[f64]| Ok(vec![1.0 / x[0]]), &[0.0], &cfg).unwrap_err();
        assert_eq!(err, Error::NonFiniteResidual);
    }

    #[test]
    fn projection_keeps_iterates_feasible() {
        // Minimum of (x - 2)² sits outside [0, 1]; the projected solver
        // stops on the bound.
        let cfg = SolverConfig::default();
        let out = levenberg_marquardt_projected(
            |x: &[f64]| Ok(vec![x[0] - 2.0]),
            |x: &mut [f64]| x[0] = x[0].clamp(0.0, 1.0),
            &[0.2],
            &cfg,
        )
        .unwrap();
        assert_eq!(out.x[0], 1.0);
        assert!((out.xi - 1.0).abs() < 1e-15);
    }
}
