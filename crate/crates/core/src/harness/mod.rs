//! Scenario files, single runs, parameter sweeps and the reference reproduction.

mod reproduce;
mod run;
mod scenario;
mod sweep;

pub use reproduce::{
    reproduce, OrderingCheck, ReferenceRow, ReproduceOptions, ReproduceReport, RowCheck, Verdict, REFERENCE_TABLE,
    REPRODUCTION_SEED, SYMMETRIC_PLACEMENT_TOL_M, SYMMETRIC_TOTAL_TOL, UNIFORM_TOTAL_TOL,
};
pub use run::{run_scenario, solve, solve_to_dir, write_run, RunRecord, Timing, TOOL_VERSION};
pub use scenario::{baseline_gd, Overrides, Scenario, UserSpec, SCHEMA_VERSION, SEED_ENV};
pub use sweep::{sweep, write_summary, SummaryRow, SweepAxis};
