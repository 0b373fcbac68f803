use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use crate::error::Result;
use crate::geometry::ThetaConvention;
use crate::objective::{CostReport, CostUnit, Objective};
use crate::solvers::{gd_solve, grid_solve, pso_solve, write_trace_csv, PlacementResult, SolverKind};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Non-deterministic part of a run record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix_s: u64,
    pub wall_clock_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool_version: String,
    pub scenario_digest: String,
    pub solver: SolverKind,
    pub theta_convention: ThetaConvention,
    pub cost_unit: CostUnit,
    pub result: PlacementResult,
    /// Evaluation of `result.best_location`.
    pub report: CostReport,
    pub timing: Timing,
}

impl RunRecord {
    pub fn feasible(&self) -> bool {
        self.report.feasible
    }
}

/// Runs the scenario's solver against the given objective.
pub fn solve(scenario: &Scenario, objective: &Objective) -> Result<PlacementResult> {
    let cost = |p: &crate::geometry::Point3| objective.cost(p);
    match scenario.solver {
        SolverKind::Pso => pso_solve(cost, &scenario.pso),
        SolverKind::Gd => gd_solve(cost, &scenario.gd_start(), &scenario.gd),
        SolverKind::Grid => grid_solve(cost, &scenario.grid_bounds(), &scenario.grid),
    }
}

pub fn run_scenario(scenario: &Scenario) -> Result<RunRecord> {
    scenario.validate()?;
    let started_unix_s = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let objective = scenario.objective()?;
    let result = solve(scenario, &objective)?;
    let report = objective.evaluate(&result.best_location)?;
    Ok(RunRecord {
        tool_version: TOOL_VERSION.to_string(),
        scenario_digest: scenario.digest(),
        solver: scenario.solver,
        theta_convention: scenario.theta_convention,
        cost_unit: scenario.cost_unit,
        result,
        report,
        timing: Timing {
            started_unix_s,
            wall_clock_s: clock.elapsed().as_secs_f64(),
        },
    })
}

/// Writes `result.json` and `trace.csv` for a finished run.
pub fn write_run(record: &RunRecord, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let json = BufWriter::new(File::create(out_dir.join("result.json"))?);
    serde_json::to_writer_pretty(json, record)?;
    write_trace_csv(File::create(out_dir.join("trace.csv"))?, &record.result.trace)?;
    Ok(())
}

pub fn solve_to_dir(scenario: &Scenario, out_dir: &Path) -> Result<RunRecord> {
    let record = run_scenario(scenario)?;
    write_run(&record, out_dir)?;
    Ok(record)
}
