use serde::{Deserialize, Serialize};

use super::{PlacementResult, SolverKind, Termination, TracePoint};
use crate::error::{Error, Result};
use crate::geometry::Point3;

/// Which coordinates gradient descent may move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axes {
    pub x: bool,
    pub y: bool,
    pub z: bool,
}

impl Axes {
    pub const ALL: Axes = Axes {
        x: true,
        y: true,
        z: true,
    };
    /// Only x moves; y and z stay at the start point.
    pub const X_ONLY: Axes = Axes {
        x: true,
        y: false,
        z: false,
    };

    fn as_array(&self) -> [bool; 3] {
        [self.x, self.y, self.z]
    }
}

impl Default for Axes {
    fn default() -> Self {
        Self::ALL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GdConfig {
    pub max_iter: usize,
    /// Stop once an accepted step is shorter than this (meters).
    pub step_tol: f64,
    /// Central-difference half width per axis (meters).
    pub fd_step: f64,
    pub initial_step: f64,
    pub armijo: f64,
    pub max_halvings: usize,
    pub free_axes: Axes,
}

impl Default for GdConfig {
    fn default() -> Self {
        Self {
            max_iter: 100,
            step_tol: 0.01,
            fd_step: 0.1,
            initial_step: 1.0,
            armijo: 1e-4,
            max_halvings: 60,
            free_axes: Axes::ALL,
        }
    }
}

impl GdConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("step_tol", self.step_tol),
            ("fd_step", self.fd_step),
            ("initial_step", self.initial_step),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(0.0..1.0).contains(&self.armijo) {
            return Err(Error::Config(format!("armijo constant must be in [0, 1), got {}", self.armijo)));
        }
        Ok(())
    }
}

/// Steepest descent with central-difference gradients and a halving
/// backtracking line search under the Armijo condition.
pub fn gd_solve<F>(cost: F, start: &Point3, config: &GdConfig) -> Result<PlacementResult>
where
    F: Fn(&Point3) -> f64,
{
    config.validate()?;
    let free = config.free_axes.as_array();
    let eval = |x: &[f64; 3]| cost(&Point3::from(*x));

    let mut x = start.to_array();
    let mut fx = eval(&x);
    if !fx.is_finite() {
        return Err(Error::NonFiniteStart);
    }
    let mut evaluations = 1u64;
    let mut trace = vec![TracePoint {
        iteration: 0,
        global_best_cost_db: fx,
    }];
    let mut termination = Termination::MaxIterations;

    'outer: for iteration in 1..=config.max_iter {
        let mut grad = [0.0; 3];
        for d in (0..3).filter(|&d| free[d]) {
            let (mut up, mut down) = (x, x);
            up[d] += config.fd_step;
            down[d] -= config.fd_step;
            grad[d] = (eval(&up) - eval(&down)) / (2.0 * config.fd_step);
            evaluations += 2;
        }
        if grad.iter().any(|g| !g.is_finite()) {
            termination = Termination::Stagnation;
            break;
        }
        let grad_sq: f64 = grad.iter().map(|g| g * g).sum();
        if grad_sq == 0.0 {
            termination = Termination::StepTolerance;
            break;
        }

        let mut alpha = config.initial_step;
        for _ in 0..=config.max_halvings {
            let candidate: [f64; 3] = std::array::from_fn(|d| x[d] - alpha * grad[d]);
            let fc = eval(&candidate);
            evaluations += 1;
            if fc <= fx - config.armijo * alpha * grad_sq {
                x = candidate;
                fx = fc;
                trace.push(TracePoint {
                    iteration,
                    global_best_cost_db: fx,
                });
                if alpha * grad_sq.sqrt() < config.step_tol {
                    termination = Termination::StepTolerance;
                    break 'outer;
                }
                continue 'outer;
            }
            alpha *= 0.5;
        }
        termination = Termination::Stagnation;
        break;
    }

    Ok(PlacementResult {
        solver: SolverKind::Gd,
        best_location: Point3::from(x),
        best_cost: fx,
        trace,
        evaluations,
        termination,
    })
}
