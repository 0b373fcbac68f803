use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{PlacementResult, SolverKind, Termination, TracePoint};
use crate::error::{Error, Result};
use crate::geometry::Point3;

const DIM: usize = 3;

/// Swarm settings. Defaults are kappa = 1, phi1 = phi2 = 2.05, 50 particles,
/// 50 iterations over `[-1000, 1000]^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoConfig {
    pub kappa: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub npop: usize,
    pub maxit: usize,
    pub varmin: f64,
    pub varmax: f64,
    pub seed: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            phi1: 2.05,
            phi2: 2.05,
            npop: 50,
            maxit: 50,
            varmin: -1000.0,
            varmax: 1000.0,
            seed: 0,
        }
    }
}

/// Clerc-Kennedy constriction and the update coefficients derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constriction {
    pub chi: f64,
    /// Inertia weight.
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::Config(format!("kappa must be positive, got {}", self.kappa)));
        }
        let phi = self.phi1 + self.phi2;
        if !(phi > 4.0) || !phi.is_finite() {
            return Err(Error::Config(format!("phi1 + phi2 must exceed 4, got {phi}")));
        }
        if self.npop == 0 {
            return Err(Error::Config("npop must be at least 1".into()));
        }
        if !(self.varmin.is_finite() && self.varmax.is_finite() && self.varmin < self.varmax) {
            return Err(Error::Config(format!(
                "varmin ({}) must be below varmax ({})",
                self.varmin, self.varmax
            )));
        }
        Ok(())
    }

    pub fn coefficients(&self) -> Result<Constriction> {
        self.validate()?;
        let phi = self.phi1 + self.phi2;
        let chi = 2.0 * self.kappa / (2.0 - phi - (phi * phi - 4.0 * phi).sqrt()).abs();
        Ok(Constriction {
            chi,
            w: chi,
            c1: chi * self.phi1,
            c2: chi * self.phi2,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub location: [f64; DIM],
    pub velocity: [f64; DIM],
    pub cost: f64,
    pub best_location: [f64; DIM],
    pub best_cost: f64,
}

/// Stream 0 seeds the initial swarm, stream `t` drives iteration `t`.
fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn finite_or_inf(c: f64) -> f64 {
    if c.is_nan() {
        f64::INFINITY
    } else {
        c
    }
}

/// Constriction-factor particle swarm.
///
/// Particles start uniformly in the `[varmin, varmax]^3` cube with zero
/// velocity. Each iteration visits particles in index order: the velocity is
/// `w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)` with fresh per-dimension
/// uniforms (all three `r1` then all three `r2`), the location moves by the
/// velocity, and personal and global bests update on strict improvement. A
/// coordinate leaving the cube is clamped to the bound and its velocity zeroed.
pub fn pso_solve<F>(cost: F, config: &PsoConfig) -> Result<PlacementResult>
where
    F: Fn(&Point3) -> f64,
{
    let coef = config.coefficients()?;
    let (lo, hi) = (config.varmin, config.varmax);
    let eval = |x: &[f64; DIM]| finite_or_inf(cost(&Point3::from(*x)));

    let mut rng = stream_rng(config.seed, 0);
    let mut swarm = Vec::with_capacity(config.npop);
    let mut gbest = [0.0; DIM];
    let mut gbest_cost = f64::INFINITY;
    for _ in 0..config.npop {
        let mut location = [0.0; DIM];
        for v in &mut location {
            *v = lo + (hi - lo) * rng.gen::<f64>();
        }
        let c = eval(&location);
        if c < gbest_cost {
            gbest_cost = c;
            gbest = location;
        }
        swarm.push(Particle {
            location,
            velocity: [0.0; DIM],
            cost: c,
            best_location: location,
            best_cost: c,
        });
    }
    if !gbest_cost.is_finite() {
        return Err(Error::InitializationFailed);
    }

    let mut trace = Vec::with_capacity(config.maxit + 1);
    trace.push(TracePoint {
        iteration: 0,
        global_best_cost_db: gbest_cost,
    });
    for t in 1..=config.maxit {
        let mut rng = stream_rng(config.seed, t as u64);
        for p in swarm.iter_mut() {
            let r1: [f64; DIM] = std::array::from_fn(|_| rng.gen());
            let r2: [f64; DIM] = std::array::from_fn(|_| rng.gen());
            for d in 0..DIM {
                p.velocity[d] = coef.w * p.velocity[d]
                    + coef.c1 * r1[d] * (p.best_location[d] - p.location[d])
                    + coef.c2 * r2[d] * (gbest[d] - p.location[d]);
                p.location[d] += p.velocity[d];
                if p.location[d] < lo {
                    p.location[d] = lo;
                    p.velocity[d] = 0.0;
                } else if p.location[d] > hi {
                    p.location[d] = hi;
                    p.velocity[d] = 0.0;
                }
            }
            p.cost = eval(&p.location);
            if p.cost < p.best_cost {
                p.best_location = p.location;
                p.best_cost = p.cost;
                if p.best_cost < gbest_cost {
                    gbest = p.best_location;
                    gbest_cost = p.best_cost;
                }
            }
        }
        trace.push(TracePoint {
            iteration: t,
            global_best_cost_db: gbest_cost,
        });
    }

    Ok(PlacementResult {
        solver: SolverKind::Pso,
        best_location: Point3::from(gbest),
        best_cost: gbest_cost,
        trace,
        evaluations: (config.npop * (config.maxit + 1)) as u64,
        termination: Termination::MaxIterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sq_dist(target: Point3) -> impl Fn(&Point3) -> f64 {
        move |p| {
            let (dx, dy, dz) = (p.x - target.x, p.y - target.y, p.z - target.z);
            dx * dx + dy * dy + dz * dz
        }
    }

    #[test]
    fn constriction_defaults() {
        // phi = 4.1, sqrt(phi^2 - 4 phi) = sqrt(0.41)
        let c = PsoConfig::default().coefficients().unwrap();
        let expected_chi = 2.0 / (2.0 - 4.1 - 0.41f64.sqrt()).abs();
        assert_abs_diff_eq!(c.chi, expected_chi, epsilon = 1e-15);
        assert_abs_diff_eq!(c.chi, 0.729_843_8, epsilon = 1e-6);
        assert_abs_diff_eq!(c.w, c.chi);
        assert_abs_diff_eq!(c.c1, 1.496_179_7, epsilon = 1e-6);
        assert_abs_diff_eq!(c.c2, 1.496_179_7, epsilon = 1e-6);
    }

    #[test]
    fn invalid_configs() {
        let bad_phi = PsoConfig {
            phi1: 2.0,
            phi2: 2.0,
            ..Default::default()
        };
        assert!(bad_phi.coefficients().is_err());
        let no_particles = PsoConfig {
            npop: 0,
            ..Default::default()
        };
        assert!(no_particles.validate().is_err());
        let flipped = PsoConfig {
            varmin: 5.0,
            varmax: -5.0,
            ..Default::default()
        };
        assert!(flipped.validate().is_err());
    }

    #[test]
    fn converges_on_shifted_sphere() {
        let target = Point3::new(3.0, -7.0, 120.0);
        let cfg = PsoConfig {
            maxit: 200,
            seed: 11,
            ..Default::default()
        };
        let r = pso_solve(sq_dist(target), &cfg).unwrap();
        assert!(r.best_location.distance(&target) < 1e-3, "{:?}", r.best_location);
        assert!(r.trace_is_monotone());
        assert_eq!(r.trace.len(), 201);
        assert_eq!(r.trace.last().unwrap().global_best_cost_db, r.best_cost);
        assert_eq!(r.evaluations, 50 * 201);
    }

    #[test]
    fn same_seed_same_result() {
        let cfg = PsoConfig {
            seed: 99,
            ..Default::default()
        };
        let f = sq_dist(Point3::new(1.0, 2.0, 3.0));
        assert_eq!(pso_solve(&f, &cfg).unwrap(), pso_solve(&f, &cfg).unwrap());
        let other = PsoConfig { seed: 100, ..cfg };
        assert_ne!(pso_solve(&f, &cfg).unwrap().trace, pso_solve(&f, &other).unwrap().trace);
    }

    #[test]
    fn stays_inside_cube() {
        // optimum outside the cube: the swarm must pin to the corner
        let cfg = PsoConfig {
            varmin: -10.0,
            varmax: 10.0,
            seed: 3,
            ..Default::default()
        };
        let r = pso_solve(sq_dist(Point3::new(50.0, -50.0, 50.0)), &cfg).unwrap();
        for v in r.best_location.to_array() {
            assert!((-10.0..=10.0).contains(&v));
        }
        assert_abs_diff_eq!(r.best_location.x, 10.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.best_location.y, -10.0, epsilon = 1e-9);
    }

    #[test]
    fn all_infinite_start_fails() {
        let r = pso_solve(|_: &Point3| f64::INFINITY, &PsoConfig::default());
        assert!(matches!(r, Err(Error::InitializationFailed)));
        let nan = pso_solve(|_: &Point3| f64::NAN, &PsoConfig::default());
        assert!(matches!(nan, Err(Error::InitializationFailed)));
    }

    #[test]
    fn zero_iterations_returns_initial_best() {
        let cfg = PsoConfig {
            maxit: 0,
            ..Default::default()
        };
        let r = pso_solve(sq_dist(Point3::default()), &cfg).unwrap();
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.evaluations, 50);
    }
}
