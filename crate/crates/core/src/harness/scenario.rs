use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{
    generate_symmetric_grid, generate_uniform_users, Building, Distribution, GridShape, Point3, ThetaConvention, UserSet,
};
use crate::objective::{CostUnit, Objective, RadioConfig, SearchBounds};
use crate::propagation::PathLossParams;
use crate::solvers::{Axes, GdConfig, GridConfig, PsoConfig, SolverKind};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable consulted for the solver seed when no flag is given.
pub const SEED_ENV: &str = "UAVPLACE_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UserSpec {
    pub distribution: Distribution,
    pub users_per_floor: usize,
    /// Only used by `uniform_per_floor`.
    pub seed: u64,
    /// Symmetric layout grid; factored from `users_per_floor` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridShape>,
}

impl Default for UserSpec {
    fn default() -> Self {
        Self {
            distribution: Distribution::SymmetricGrid,
            users_per_floor: 20,
            seed: 0,
            grid: None,
        }
    }
}

/// Gradient descent as used for the baseline: only x moves, y and z stay at
/// the building's mid-planes.
pub fn baseline_gd() -> GdConfig {
    GdConfig {
        free_axes: Axes::X_ONLY,
        ..GdConfig::default()
    }
}

/// Everything needed for one run. Omitted fields take the reference defaults,
/// so the smallest valid file is `{"building": {"x_b": .., "y_b": .., "z_b": ..}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub building: Building,
    #[serde(default)]
    pub users: UserSpec,
    #[serde(default)]
    pub path_loss: PathLossParams,
    #[serde(default)]
    pub theta_convention: ThetaConvention,
    #[serde(default)]
    pub cost_unit: CostUnit,
    /// Defaults to [`SearchBounds::facade_side`].
    #[serde(default = "SearchBounds::facade_side")]
    pub bounds: SearchBounds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radio: Option<RadioConfig>,
    #[serde(default = "default_solver")]
    pub solver: SolverKind,
    #[serde(default)]
    pub pso: PsoConfig,
    #[serde(default = "baseline_gd")]
    pub gd: GdConfig,
    /// Defaults to `(-x_b, y_b / 2, z_b / 2)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gd_start: Option<Point3>,
    #[serde(default)]
    pub grid: GridConfig,
    /// Defaults to `x in [-150, -1]`, `y in [0, y_b]`, `z in [0, z_b]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_bounds: Option<SearchBounds>,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn default_solver() -> SolverKind {
    SolverKind::Pso
}

impl Scenario {
    /// Reference defaults around the given building.
    pub fn for_building(building: Building) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            building,
            users: UserSpec::default(),
            path_loss: PathLossParams::default(),
            theta_convention: ThetaConvention::default(),
            cost_unit: CostUnit::default(),
            bounds: SearchBounds::facade_side(),
            radio: None,
            solver: default_solver(),
            pso: PsoConfig::default(),
            gd: baseline_gd(),
            gd_start: None,
            grid: GridConfig::default(),
            grid_bounds: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                Error::Scenario(inner.to_string())
            } else {
                Error::Scenario(format!("{path}: {inner}"))
            }
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Scenario(format!(
                "unsupported schema {} (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        self.building.validate()?;
        self.path_loss.validate()?;
        self.bounds.validate()?;
        self.pso.validate()?;
        self.gd.validate()?;
        if self.users.users_per_floor == 0 {
            return Err(Error::Scenario("users.users_per_floor must be at least 1".into()));
        }
        if let Some(g) = self.users.grid {
            if g.count() != self.users.users_per_floor {
                return Err(Error::Config(format!(
                    "users_per_floor {} does not factor into the {}x{} grid",
                    self.users.users_per_floor, g.nx, g.ny
                )));
            }
        }
        if let Some(radio) = &self.radio {
            radio.validate()?;
            let m = self.user_count();
            if radio.num_users_m != m {
                return Err(Error::Scenario(format!(
                    "radio.num_users_m = {} but the scenario has {m} users",
                    radio.num_users_m
                )));
            }
        }
        let b = &self.bounds;
        if b.x_max < self.pso.varmin
            || b.x_min > self.pso.varmax
            || b.y_max < self.pso.varmin
            || b.y_min > self.pso.varmax
            || b.z_max < self.pso.varmin
            || b.z_min > self.pso.varmax
        {
            return Err(Error::Scenario("search box does not intersect the swarm's [varmin, varmax] cube".into()));
        }
        self.grid_bounds().validate()?;
        if !(self.grid.resolution > 0.0) {
            return Err(Error::Scenario("grid.resolution must be positive".into()));
        }
        Ok(())
    }

    pub fn user_count(&self) -> usize {
        self.users.users_per_floor * self.building.floor_count()
    }

    pub fn user_set(&self) -> Result<UserSet> {
        match self.users.distribution {
            Distribution::SymmetricGrid => {
                let shape = match self.users.grid {
                    Some(g) => g,
                    None => GridShape::for_count(self.users.users_per_floor)?,
                };
                generate_symmetric_grid(&self.building, shape)
            }
            Distribution::UniformPerFloor => {
                generate_uniform_users(&self.building, self.users.users_per_floor, self.users.seed)
            }
        }
    }

    pub fn objective(&self) -> Result<Objective> {
        let mut obj = Objective::new(self.user_set()?, self.building, self.path_loss)?
            .with_convention(self.theta_convention)
            .with_unit(self.cost_unit)
            .with_bounds(self.bounds)?;
        if let Some(radio) = self.radio {
            obj = obj.with_radio(radio)?;
        }
        Ok(obj)
    }

    pub fn gd_start(&self) -> Point3 {
        self.gd_start.unwrap_or(Point3::new(
            -self.building.x_b,
            self.building.y_b / 2.0,
            self.building.z_b / 2.0,
        ))
    }

    pub fn grid_bounds(&self) -> SearchBounds {
        self.grid_bounds.unwrap_or_else(|| {
            SearchBounds::new((-150.0, -1.0), (0.0, self.building.y_b), (0.0, self.building.z_b))
        })
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("scenario always serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

/// Command-line overrides applied on top of a scenario file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub solver: Option<SolverKind>,
    pub seed: Option<u64>,
    pub theta_convention: Option<ThetaConvention>,
    pub cost_unit: Option<CostUnit>,
}

impl Overrides {
    /// Fills `seed` from `UAVPLACE_SEED` when no explicit seed was given.
    pub fn with_env_seed(mut self) -> Result<Self> {
        if self.seed.is_none() {
            if let Ok(v) = std::env::var(SEED_ENV) {
                let seed = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("{SEED_ENV}=`{v}` is not a u64")))?;
                self.seed = Some(seed);
            }
        }
        Ok(self)
    }

    /// A seed override replaces both the uniform user draw seed and the swarm seed.
    pub fn apply(&self, scenario: &mut Scenario) {
        if let Some(s) = self.solver {
            scenario.solver = s;
        }
        if let Some(seed) = self.seed {
            scenario.users.seed = seed;
            scenario.pso.seed = seed;
        }
        if let Some(c) = self.theta_convention {
            scenario.theta_convention = c;
        }
        if let Some(u) = self.cost_unit {
            scenario.cost_unit = u;
        }
    }
}
