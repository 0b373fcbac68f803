//! Placement of a single UAV base station serving the indoor users of a
//! high-rise building.
//!
//! The cost of a UAV position is the total outdoor-to-indoor path loss over
//! all users ([`objective`]). It is minimized with a constriction-factor
//! particle swarm, a finite-difference gradient-descent baseline, or an
//! exhaustive lattice search ([`solvers`]). [`harness`] wires scenarios,
//! runs, sweeps and the reference reproduction together.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod objective;
pub mod propagation;
pub mod solvers;

pub use error::{Error, Result};
pub use geometry::{
    generate_symmetric_users, generate_uniform_users, link_geometry, Building, Distribution, LinkGeometry, Point3,
    ThetaConvention, UavPosition, UserSet,
};
pub use objective::{CostReport, CostUnit, Objective, RadioConfig, SearchBounds};
pub use propagation::{path_loss, LossBreakdown, PathLossParams};
pub use solvers::{gd_solve, grid_solve, pso_solve, GdConfig, GridConfig, PlacementResult, PsoConfig, SolverKind};
