use std::path::Path;

use serde::Serialize;

use super::run::{run_scenario, write_run, RunRecord};
use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::solvers::SolverKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Building height `z_b`.
    Height,
    /// Building width `x_b`.
    Width,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Height => "height",
            SweepAxis::Width => "width",
        }
    }

    pub fn apply(&self, scenario: &mut Scenario, value: f64) {
        match self {
            SweepAxis::Height => scenario.building.z_b = value,
            SweepAxis::Width => scenario.building.x_b = value,
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "height" => Ok(Self::Height),
            "width" => Ok(Self::Width),
            other => Err(Error::Config(format!("unknown sweep axis `{other}`"))),
        }
    }
}

/// One line of `summary.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub solver: SolverKind,
    pub distribution: String,
    pub z_b: f64,
    pub x_b: f64,
    pub y_b: f64,
    pub best_x: f64,
    pub best_y: f64,
    pub best_z: f64,
    pub total_loss_db: f64,
}

impl SummaryRow {
    pub fn new(scenario: &Scenario, record: &RunRecord) -> Self {
        let p = record.result.best_location;
        Self {
            solver: record.solver,
            distribution: scenario.users.distribution.to_string(),
            z_b: scenario.building.z_b,
            x_b: scenario.building.x_b,
            y_b: scenario.building.y_b,
            best_x: p.x,
            best_y: p.y,
            best_z: p.z,
            total_loss_db: record.report.total_loss_db,
        }
    }
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    if rows.is_empty() {
        w.write_record([
            "solver",
            "distribution",
            "z_b",
            "x_b",
            "y_b",
            "best_x",
            "best_y",
            "best_z",
            "total_loss_db",
        ])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs every `(value, solver)` pair in declared order, writing each run to
/// `out_dir/<axis>-<value>-<solver>/` and the table to `out_dir/summary.csv`.
///
/// On a failing run the rows gathered so far are still written and an
/// `INCOMPLETE` file records the error.
pub fn sweep(
    base: &Scenario,
    axis: SweepAxis,
    values: &[f64],
    solvers: &[SolverKind],
    out_dir: &Path,
) -> Result<Vec<SummaryRow>> {
    std::fs::create_dir_all(out_dir)?;
    let mut rows = Vec::with_capacity(values.len() * solvers.len());
    for &value in values {
        for &solver in solvers {
            let mut scenario = base.clone();
            axis.apply(&mut scenario, value);
            scenario.solver = solver;
            let outcome = run_scenario(&scenario).and_then(|record| {
                write_run(&record, &out_dir.join(format!("{}-{value}-{solver}", axis.name())))?;
                Ok(record)
            });
            match outcome {
                Ok(record) => rows.push(SummaryRow::new(&scenario, &record)),
                Err(e) => {
                    write_summary(&out_dir.join("summary.csv"), &rows)?;
                    std::fs::write(
                        out_dir.join("INCOMPLETE"),
                        format!("{} = {value}, solver {solver}: {e}\n", axis.name()),
                    )?;
                    return Err(e);
                }
            }
        }
    }
    write_summary(&out_dir.join("summary.csv"), &rows)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Building;

    #[test]
    fn row_count_and_order() {
        let mut base = Scenario::for_building(Building::with_default_floors(20.0, 50.0, 30.0).unwrap());
        base.pso.npop = 10;
        base.pso.maxit = 10;
        let dir = tempfile::tempdir().unwrap();
        let rows = sweep(&base, SweepAxis::Height, &[20.0, 30.0], &[SolverKind::Pso, SolverKind::Gd], dir.path()).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].z_b, 20.0);
        assert_eq!(rows[1].solver, SolverKind::Gd);
        let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(summary.lines().count(), 5);
        assert!(summary.starts_with("solver,distribution,z_b,x_b,y_b,best_x,best_y,best_z,total_loss_db\n"));
        assert!(dir.path().join("height-30-gd/trace.csv").exists());
    }

    #[test]
    fn empty_values_give_empty_summary() {
        let base = Scenario::for_building(Building::with_default_floors(20.0, 50.0, 30.0).unwrap());
        let dir = tempfile::tempdir().unwrap();
        let rows = sweep(&base, SweepAxis::Width, &[], &[SolverKind::Pso], dir.path()).unwrap();
        assert!(rows.is_empty());
        let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(summary.lines().count(), 1);
    }

    #[test]
    fn failing_run_leaves_partial_summary() {
        let mut base = Scenario::for_building(Building::with_default_floors(20.0, 50.0, 30.0).unwrap());
        base.pso.npop = 5;
        base.pso.maxit = 5;
        let dir = tempfile::tempdir().unwrap();
        // 32 m is not a whole number of 5 m floors
        let err = sweep(&base, SweepAxis::Height, &[30.0, 32.0], &[SolverKind::Pso], dir.path());
        assert!(err.is_err());
        let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(summary.lines().count(), 2);
        assert!(dir.path().join("INCOMPLETE").exists());
    }
}
