use serde::{Deserialize, Serialize};

use super::{PlacementResult, SolverKind, Termination, TracePoint};
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::objective::SearchBounds;

pub const DEFAULT_GRID_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Lattice spacing in meters.
    pub resolution: f64,
    pub max_evaluations: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            resolution: 1.0,
            max_evaluations: DEFAULT_GRID_BUDGET,
        }
    }
}

/// Lattice coordinates `lo, lo + step, ...` not exceeding `hi`.
fn axis_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|k| lo + k as f64 * step).collect()
}

fn lattice(bounds: &SearchBounds, resolution: f64) -> Result<[Vec<f64>; 3]> {
    bounds.validate()?;
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::Config(format!("resolution must be positive, got {resolution}")));
    }
    Ok([
        axis_points(bounds.x_min, bounds.x_max, resolution),
        axis_points(bounds.y_min, bounds.y_max, resolution),
        axis_points(bounds.z_min, bounds.z_max, resolution),
    ])
}

fn lattice_size(axes: &[Vec<f64>; 3]) -> u64 {
    axes.iter().map(|a| a.len() as u64).product()
}

fn search(cost: &impl Fn(&Point3) -> f64, axes: &[Vec<f64>; 3], trace: &mut Vec<TracePoint>) -> (Point3, f64) {
    let mut best = Point3::new(axes[0][0], axes[1][0], axes[2][0]);
    let mut best_cost = f64::INFINITY;
    for &x in &axes[0] {
        for &y in &axes[1] {
            for &z in &axes[2] {
                let p = Point3::new(x, y, z);
                let c = cost(&p);
                // strict `<` with ascending loops keeps the lexicographically smallest tie
                if c < best_cost {
                    best_cost = c;
                    best = p;
                }
            }
        }
        trace.push(TracePoint {
            iteration: trace.len(),
            global_best_cost_db: best_cost,
        });
    }
    (best, best_cost)
}

/// Exhaustive minimum over the lattice anchored at the lower corner of `bounds`.
pub fn grid_solve<F>(cost: F, bounds: &SearchBounds, config: &GridConfig) -> Result<PlacementResult>
where
    F: Fn(&Point3) -> f64,
{
    let axes = lattice(bounds, config.resolution)?;
    let required = lattice_size(&axes);
    if required > config.max_evaluations {
        return Err(Error::BudgetExceeded {
            required,
            budget: config.max_evaluations,
        });
    }
    let mut trace = Vec::with_capacity(axes[0].len());
    let (best_location, best_cost) = search(&cost, &axes, &mut trace);
    if !best_cost.is_finite() {
        return Err(Error::NoFeasiblePoint);
    }
    Ok(PlacementResult {
        solver: SolverKind::Grid,
        best_location,
        best_cost,
        trace,
        evaluations: required,
        termination: Termination::Exhausted,
    })
}

/// Coarse-to-fine lattice search. A `coarse` lattice locates the basin, then
/// the fine lattice (anchored like a full `fine` search, so its points are a
/// subset of it) is scanned within `coarse` meters of the coarse winner.
///
/// Exact when the cost has a single basin wider than the coarse spacing.
pub fn grid_solve_refined<F>(cost: F, bounds: &SearchBounds, coarse: f64, config: &GridConfig) -> Result<PlacementResult>
where
    F: Fn(&Point3) -> f64,
{
    let fine = config.resolution;
    if !(coarse >= fine) {
        return Err(Error::Config(format!("coarse spacing {coarse} is finer than {fine}")));
    }
    let coarse_result = grid_solve(
        &cost,
        bounds,
        &GridConfig {
            resolution: coarse,
            ..*config
        },
    )?;
    let full = lattice(bounds, fine)?;
    let c = coarse_result.best_location.to_array();
    let window: [Vec<f64>; 3] = std::array::from_fn(|d| {
        full[d]
            .iter()
            .copied()
            .filter(|v| (v - c[d]).abs() <= coarse + 1e-9)
            .collect()
    });
    let required = lattice_size(&window);
    if coarse_result.evaluations + required > config.max_evaluations {
        return Err(Error::BudgetExceeded {
            required: coarse_result.evaluations + required,
            budget: config.max_evaluations,
        });
    }
    let mut trace = coarse_result.trace.clone();
    let coarse_len = trace.len();
    let (mut best_location, mut best_cost) = search(&cost, &window, &mut trace);
    // the fine scan starts from scratch; report it against the coarse incumbent
    for t in &mut trace[coarse_len..] {
        t.global_best_cost_db = t.global_best_cost_db.min(coarse_result.best_cost);
    }
    if coarse_result.best_cost < best_cost {
        best_location = coarse_result.best_location;
        best_cost = coarse_result.best_cost;
    }
    Ok(PlacementResult {
        solver: SolverKind::Grid,
        best_location,
        best_cost,
        trace,
        evaluations: coarse_result.evaluations + required,
        termination: Termination::Exhausted,
    })
}
