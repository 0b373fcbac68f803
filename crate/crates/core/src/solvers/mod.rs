//! Minimizers over a 3D position: constriction PSO, finite-difference
//! gradient descent, and an exhaustive lattice search used as an oracle.

mod gd;
mod grid;
mod pso;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::Point3;

pub use gd::{gd_solve, Axes, GdConfig};
pub use grid::{grid_solve, grid_solve_refined, GridConfig, DEFAULT_GRID_BUDGET};
pub use pso::{pso_solve, Constriction, Particle, PsoConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Pso,
    Gd,
    Grid,
}

impl SolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Pso => "pso",
            SolverKind::Gd => "gd",
            SolverKind::Grid => "grid",
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SolverKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pso" => Ok(Self::Pso),
            "gd" => Ok(Self::Gd),
            "grid" => Ok(Self::Grid),
            other => Err(crate::Error::Config(format!("unknown solver `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Iteration budget used up.
    MaxIterations,
    /// Accepted step shorter than the step tolerance.
    StepTolerance,
    /// Line search found no descent.
    Stagnation,
    /// Lattice fully enumerated.
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub global_best_cost_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementResult {
    pub solver: SolverKind,
    pub best_location: Point3,
    pub best_cost: f64,
    /// Best cost after each iteration; entry 0 is the starting state.
    pub trace: Vec<TracePoint>,
    pub evaluations: u64,
    pub termination: Termination,
}

impl PlacementResult {
    pub fn trace_is_monotone(&self) -> bool {
        self.trace
            .windows(2)
            .all(|w| w[1].global_best_cost_db <= w[0].global_best_cost_db)
    }
}

/// Writes `iteration,global_best_cost_db` rows with round-trip float formatting.
pub fn write_trace_csv<W: Write>(writer: W, trace: &[TracePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["iteration", "global_best_cost_db"])?;
    for p in trace {
        w.write_record([p.iteration.to_string(), p.global_best_cost_db.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
