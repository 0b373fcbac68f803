//! Re-runs the reference result table and checks placements and totals.

use std::fmt::Write as _;

use serde::Serialize;

use super::run::{run_scenario, RunRecord};
use super::scenario::Scenario;
use crate::error::Result;
use crate::geometry::{Building, Distribution, Point3, ThetaConvention};
use crate::objective::CostUnit;
use crate::solvers::SolverKind;

/// Placement tolerance per axis for the symmetric layouts (meters).
pub const SYMMETRIC_PLACEMENT_TOL_M: f64 = 2.0;
/// Relative tolerance on total loss for the symmetric layouts.
pub const SYMMETRIC_TOTAL_TOL: f64 = 0.002;
/// Relative tolerance on total loss for uniform draws.
pub const UNIFORM_TOTAL_TOL: f64 = 0.01;
/// Seed for uniform user draws and the swarm in the reproduction runs.
pub const REPRODUCTION_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub solver: SolverKind,
    pub distribution: Distribution,
    pub z_b: f64,
    pub x_b: f64,
    pub y_b: f64,
    pub placement: [f64; 3],
    pub total_db: f64,
    /// Our own total for the uniform rows at [`REPRODUCTION_SEED`]. The
    /// published uniform draws are unknown, so these stand in for `total_db`.
    pub seeded_total_db: Option<f64>,
}

const fn row(
    solver: SolverKind,
    distribution: Distribution,
    z_b: f64,
    x_b: f64,
    placement: [f64; 3],
    total_db: f64,
    seeded_total_db: Option<f64>,
) -> ReferenceRow {
    ReferenceRow {
        solver,
        distribution,
        z_b,
        x_b,
        y_b: 50.0,
        placement,
        total_db,
        seeded_total_db,
    }
}

use Distribution::{SymmetricGrid as Sym, UniformPerFloor as Uni};
use SolverKind::{Gd, Pso};

/// Published reference results, 20 users per floor, 5 m floors, 2 GHz.
pub const REFERENCE_TABLE: [ReferenceRow; 18] = [
    row(Gd, Sym, 200.0, 20.0, [-24.7967, 25.0, 100.0], 7.6733e4, None),
    row(Pso, Sym, 200.0, 20.0, [-24.7491, 24.9419, 100.0491], 7.6733e4, None),
    row(Gd, Sym, 250.0, 20.0, [-35.2978, 25.0, 125.0], 9.7381e4, None),
    row(Pso, Sym, 250.0, 20.0, [-35.3077, 24.9162, 125.0544], 9.7381e4, None),
    row(Gd, Sym, 300.0, 20.0, [-45.1131, 25.0, 150.0], 1.1837e5, None),
    row(Pso, Sym, 300.0, 20.0, [-45.1352, 25.0371, 149.7681], 1.1837e5, None),
    row(Gd, Uni, 200.0, 20.0, [-24.7254, 25.0, 100.0], 7.8853e4, Some(77016.17)),
    row(Pso, Uni, 200.0, 20.0, [-21.7995, 37.3891, 111.7901], 7.8645e4, Some(77015.88)),
    row(Gd, Uni, 250.0, 20.0, [-33.8180, 25.0, 125.0], 9.9855e4, Some(98088.56)),
    row(Pso, Uni, 250.0, 20.0, [-32.9212, 28.7125, 124.0291], 9.9725e4, Some(98088.40)),
    row(Gd, Uni, 300.0, 20.0, [-43.1170, 25.0, 150.0], 1.2154e5, Some(119555.18)),
    row(Pso, Uni, 300.0, 20.0, [-46.5898, 31.5061, 143.8588], 1.2117e5, Some(119555.09)),
    row(Gd, Uni, 250.0, 10.0, [-38.5210, 25.0, 125.0], 9.7413e4, Some(95445.98)),
    row(Pso, Uni, 250.0, 10.0, [-32.1042, 21.0174, 129.2663], 9.7252e4, Some(95445.93)),
    row(Gd, Uni, 250.0, 30.0, [-29.3930, 25.0, 125.0], 1.0275e5, Some(100730.69)),
    row(Pso, Uni, 250.0, 30.0, [-25.5294, 4.9387, 138.7650], 1.0211e5, Some(100730.33)),
    row(Gd, Uni, 250.0, 50.0, [-22.7119, 25.0, 125.0], 1.0753e5, Some(106026.36)),
    row(Pso, Uni, 250.0, 50.0, [-14.5488, 17.3082, 131.8940], 1.0696e5, Some(106025.79)),
];

impl ReferenceRow {
    pub fn scenario(&self, options: &ReproduceOptions) -> Result<Scenario> {
        let mut s = Scenario::for_building(Building::with_default_floors(self.x_b, self.y_b, self.z_b)?);
        s.users.distribution = self.distribution;
        s.users.seed = options.seed;
        s.pso.seed = options.seed;
        s.solver = self.solver;
        s.theta_convention = options.theta_convention;
        s.cost_unit = options.cost_unit;
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReproduceOptions {
    pub theta_convention: ThetaConvention,
    pub cost_unit: CostUnit,
    pub seed: u64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            theta_convention: ThetaConvention::Elevation,
            cost_unit: CostUnit::Db,
            seed: REPRODUCTION_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Totals are not in dB and cannot be compared with the reference.
    NotComparable,
    NotChecked,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Counts against the overall verdict.
    pub fn is_failure(&self) -> bool {
        matches!(self, Verdict::Fail | Verdict::NotComparable)
    }

    fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::NotComparable => "n/c",
            Verdict::NotChecked => "-",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowCheck {
    pub reference: ReferenceRow,
    pub placement: Point3,
    /// Solver's best cost, in the run's cost unit.
    pub total: f64,
    /// Published total, or the seeded total for uniform rows when it applies.
    pub reference_total: f64,
    pub total_rel_err: f64,
    pub placement_verdict: Verdict,
    pub total_verdict: Verdict,
}

/// PSO must not lose to gradient descent on a uniform layout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingCheck {
    pub z_b: f64,
    pub x_b: f64,
    pub pso_total: f64,
    pub gd_total: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproduceReport {
    pub theta_convention: ThetaConvention,
    pub cost_unit: CostUnit,
    pub rows: Vec<RowCheck>,
    pub ordering: Vec<OrderingCheck>,
}

impl ReproduceReport {
    pub fn passed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| !r.placement_verdict.is_failure() && !r.total_verdict.is_failure())
            && self.ordering.iter().all(|o| !o.verdict.is_failure())
    }

    pub fn symmetric_passed(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.reference.distribution == Distribution::SymmetricGrid)
            .all(|r| r.placement_verdict == Verdict::Pass && r.total_verdict == Verdict::Pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let unit = match self.cost_unit {
            CostUnit::Db => "dB",
            CostUnit::Linear => "linear (not comparable with reference dB totals)",
        };
        let _ = writeln!(
            out,
            "theta convention: {:?}, cost unit: {unit}",
            self.theta_convention
        );
        let _ = writeln!(
            out,
            "uniform rows: totals against our own draws at seed {REPRODUCTION_SEED}, placements not checked"
        );
        let _ = writeln!(
            out,
            "{:<4} {:<9} {:>4} {:>3}  {:>30}  {:>30}  {:>12} {:>12} {:>8}  {:<5} {:<5}",
            "alg", "users", "z_b", "x_b", "reference placement", "obtained placement", "ref total", "total", "rel err", "place", "total"
        );
        for r in &self.rows {
            let p = r.reference.placement;
            let dist = match r.reference.distribution {
                Distribution::SymmetricGrid => "symmetric",
                Distribution::UniformPerFloor => "uniform",
            };
            let _ = writeln!(
                out,
                "{:<4} {:<9} {:>4} {:>3}  {:>30}  {:>30}  {:>12.1} {:>12.1} {:>7.3}%  {:<5} {:<5}",
                r.reference.solver.name(),
                dist,
                r.reference.z_b,
                r.reference.x_b,
                format!("({:.2}, {:.2}, {:.2})", p[0], p[1], p[2]),
                format!("({:.2}, {:.2}, {:.2})", r.placement.x, r.placement.y, r.placement.z),
                r.reference_total,
                r.total,
                100.0 * r.total_rel_err,
                r.placement_verdict.label(),
                r.total_verdict.label(),
            );
        }
        for o in &self.ordering {
            let _ = writeln!(
                out,
                "ordering z_b={} x_b={}: pso {:.1} <= gd {:.1}  {}",
                o.z_b,
                o.x_b,
                o.pso_total,
                o.gd_total,
                o.verdict.label()
            );
        }
        let _ = writeln!(out, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

fn check_row(reference: &ReferenceRow, record: &RunRecord, options: &ReproduceOptions) -> RowCheck {
    let placement = record.result.best_location;
    let total = record.result.best_cost;
    let symmetric = reference.distribution == Distribution::SymmetricGrid;
    // seeded totals only describe the default conventions at the reproduction seed
    let seeded = reference.seeded_total_db.filter(|_| {
        options.seed == REPRODUCTION_SEED && options.theta_convention == ThetaConvention::default()
    });
    let reference_total = seeded.unwrap_or(reference.total_db);
    let total_rel_err = (total - reference_total).abs() / reference_total;
    let placement_verdict = if symmetric {
        let p = reference.placement;
        Verdict::from_bool(
            placement
                .to_array()
                .iter()
                .zip(p)
                .all(|(a, b)| (a - b).abs() <= SYMMETRIC_PLACEMENT_TOL_M),
        )
    } else {
        Verdict::NotChecked
    };
    let total_verdict = match options.cost_unit {
        CostUnit::Linear => Verdict::NotComparable,
        CostUnit::Db if symmetric => Verdict::from_bool(total_rel_err <= SYMMETRIC_TOTAL_TOL),
        CostUnit::Db if seeded.is_some() => Verdict::from_bool(total_rel_err <= UNIFORM_TOTAL_TOL),
        CostUnit::Db => Verdict::NotChecked,
    };
    RowCheck {
        reference: *reference,
        placement,
        total,
        reference_total,
        total_rel_err,
        placement_verdict,
        total_verdict,
    }
}

/// Runs all reference rows. `progress` is told about each finished row.
pub fn reproduce(options: &ReproduceOptions, mut progress: impl FnMut(&RowCheck)) -> Result<ReproduceReport> {
    let mut rows = Vec::with_capacity(REFERENCE_TABLE.len());
    for reference in &REFERENCE_TABLE {
        let record = run_scenario(&reference.scenario(options)?)?;
        let check = check_row(reference, &record, options);
        progress(&check);
        rows.push(check);
    }
    let mut ordering = Vec::new();
    for gd in rows.iter().filter(|r| r.reference.solver == Gd && r.reference.distribution == Uni) {
        let pso = rows.iter().find(|r| {
            r.reference.solver == Pso
                && r.reference.distribution == Uni
                && r.reference.z_b == gd.reference.z_b
                && r.reference.x_b == gd.reference.x_b
        });
        if let Some(pso) = pso {
            ordering.push(OrderingCheck {
                z_b: gd.reference.z_b,
                x_b: gd.reference.x_b,
                pso_total: pso.total,
                gd_total: gd.total,
                verdict: Verdict::from_bool(pso.total <= gd.total),
            });
        }
    }
    Ok(ReproduceReport {
        theta_convention: options.theta_convention,
        cost_unit: options.cost_unit,
        rows,
        ordering,
    })
}
