//! Damped Newton iteration with Armijo backtracking for small square systems.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{norm2, norm_inf, Lu, Matrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Convergence threshold on the infinity norm of the scaled residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Maximal number of step halvings per iteration.
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            max_halvings: 30,
        }
    }
}

impl NewtonOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

const ARMIJO: f64 = 1e-4;

/// Solves `F(x) = 0`. `residual` returns the scaled residual; it may fail for
/// parameters outside the admissible domain, which the line search treats as
/// a rejected step. `jacobian` returns the Jacobian of the same scaled map.
pub fn damped_newton(
    x0: &[f64],
    mut residual: impl FnMut(&[f64]) -> Result<Vec<f64>>,
    mut jacobian: impl FnMut(&[f64]) -> Result<Matrix>,
    opts: &NewtonOptions,
) -> Result<NewtonReport> {
    let mut x = x0.to_vec();
    let mut f = residual(&x)?;
    for it in 0..=opts.max_iter {
        let res = norm_inf(&f);
        if res <= opts.tol {
            return Ok(NewtonReport {
                x,
                residual: res,
                iterations: it,
            });
        }
        if it == opts.max_iter {
            break;
        }
        let jac = jacobian(&x)?;
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let dx = Lu::factor(&jac).solve(&rhs)?;
        let merit = norm2(&f);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + t * d).collect();
            if let Ok(ft) = residual(&trial) {
                if ft.iter().all(|v| v.is_finite()) && norm2(&ft) <= (1.0 - ARMIJO * t) * merit {
                    accepted = Some((trial, ft));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((xn, fnew)) => {
                x = xn;
                f = fnew;
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations: it + 1,
                    residual: res,
                })
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual: norm_inf(&f),
    })
}
