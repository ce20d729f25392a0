//! Damped Newton iteration for small square or rank-deficient systems.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Convergence threshold on the Euclidean residual norm.
    pub tolerance: f64,
    /// Relative central-difference step for the Jacobian.
    pub jacobian_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            tolerance: 1e-12,
            jacobian_step: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub residuals: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|r| r * r).sum::<f64>().sqrt()
}

/// Central-difference Jacobian; steps are scaled by `max(1, |xᵢ|)`.
pub fn numerical_jacobian<F>(f: &F, x: &[f64], rel_step: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let m = f(x)?.len();
    let mut jac = DMatrix::zeros(m, x.len());
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let h = rel_step * x[i].abs().max(1.0);
        probe[i] = x[i] + h;
        let plus = f(&probe)?;
        probe[i] = x[i] - h;
        let minus = f(&probe)?;
        probe[i] = x[i];
        for r in 0..m {
            jac[(r, i)] = (plus[r] - minus[r]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Minimizes `‖f(x)‖` by Newton steps from `x0`.
///
/// Each step is the minimum-norm least-squares solution of `J δ = -r`
/// (SVD), so flat directions are left alone. The step is halved until the
/// residual decreases and `feasible` accepts the trial point.
pub fn newton_solve<F, P>(
    f: F,
    x0: &[f64],
    feasible: P,
    options: &NewtonOptions,
) -> Result<NewtonOutcome>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
    P: Fn(&[f64]) -> bool,
{
    if !feasible(x0) {
        return Err(Error::Domain(
            "starting point outside the physical domain".into(),
        ));
    }
    let mut x = x0.to_vec();
    let mut r = f(&x)?;
    let mut r_norm = norm(&r);
    for iteration in 0..=options.max_iterations {
        if r_norm <= options.tolerance {
            return Ok(NewtonOutcome {
                x,
                residuals: r,
                residual_norm: r_norm,
                iterations: iteration,
            });
        }
        if iteration == options.max_iterations {
            break;
        }
        let jac = numerical_jacobian(&f, &x, options.jacobian_step)?;
        let rhs = -DVector::from_column_slice(&r);
        let svd = jac.svd(true, true);
        let cutoff = svd.singular_values.max() * 1e-12;
        let step = svd
            .solve(&rhs, cutoff)
            .map_err(|e| Error::Degenerate(format!("Newton step: {e}")))?;

        let mut lambda = 1.0;
        let mut accepted = None;
        while lambda >= 1e-10 {
            let trial: Vec<f64> = x
                .iter()
                .zip(step.iter())
                .map(|(xi, s)| xi + lambda * s)
                .collect();
            if feasible(&trial) {
                if let Ok(tr) = f(&trial) {
                    let tn = norm(&tr);
                    if tn.is_finite() && tn < r_norm {
                        accepted = Some((trial, tr, tn));
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((nx, nr, nn)) => {
                x = nx;
                r = nr;
                r_norm = nn;
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations: iteration,
                    residual: r_norm,
                })
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: options.max_iterations,
        residual: r_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_circle_line_intersection() {
        let f = |x: &[f64]| Ok(vec![x[0] * x[0] + x[1] * x[1] - 2.0, x[0] - x[1]]);
        let out = newton_solve(f, &[2.0, 0.5], |_| true, &NewtonOptions::default()).unwrap();
        assert!((out.x[0] - 1.0).abs() < 1e-12 && (out.x[1] - 1.0).abs() < 1e-12);
        assert!(out.residual_norm <= 1e-12);
    }

    #[test]
    fn rank_deficient_system_converges() {
        // One equation, two unknowns: any point on x + y = 1 will do.
        let f = |x: &[f64]| Ok(vec![x[0] + x[1] - 1.0]);
        let out = newton_solve(f, &[3.0, 3.0], |_| true, &NewtonOptions::default()).unwrap();
        assert!((out.x[0] + out.x[1] - 1.0).abs() < 1e-12);
        // Minimum-norm step moves both coordinates equally.
        assert!((out.x[0] - out.x[1]).abs() < 1e-12);
    }

    #[test]
    fn reports_failure_without_root() {
        let f = |x: &[f64]| Ok(vec![x[0] * x[0] + 1.0]);
        assert!(matches!(
            newton_solve(f, &[1.0], |_| true, &NewtonOptions::default()),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let f = |x: &[f64]| Ok(vec![x[0]]);
        assert!(matches!(
            newton_solve(f, &[-1.0], |x| x[0] > 0.0, &NewtonOptions::default()),
            Err(Error::Domain(_))
        ));
    }
}
