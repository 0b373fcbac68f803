//! Total path loss over all users, feasibility, and the loss -> power link budget.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{link_geometry_in, Building, Footprint, ThetaConvention, UavPosition, UserSet};
use crate::propagation::{path_loss, PathLossParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioConfig {
    /// Total UAV bandwidth B in Hz.
    pub bandwidth_b: f64,
    /// Per-user rate requirement v in bits/s.
    pub rate_v: f64,
    /// Noise power N in watts.
    pub noise_n: f64,
    pub p_t_max: f64,
    /// M; must match the user count when both are known.
    pub num_users_m: usize,
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("bandwidth_b", self.bandwidth_b),
            ("noise_n", self.noise_n),
            ("p_t_max", self.p_t_max),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.rate_v.is_finite() && self.rate_v >= 0.0) {
            return Err(Error::Config(format!("rate_v must be non-negative, got {}", self.rate_v)));
        }
        if self.num_users_m == 0 {
            return Err(Error::Config("num_users_m must be at least 1".into()));
        }
        Ok(())
    }

    /// Per-user channel bandwidth B / M.
    pub fn channel_bandwidth(&self) -> f64 {
        self.bandwidth_b / self.num_users_m as f64
    }

    /// `(2^(v M / B) - 1) N`, the watts needed per unit of linear path loss.
    pub fn power_per_unit_loss(&self) -> Result<f64> {
        let exponent = self.rate_v / self.channel_bandwidth();
        let snr = (exponent * std::f64::consts::LN_2).exp_m1();
        if !snr.is_finite() {
            return Err(Error::Config(format!(
                "2^(v*M/B) overflows for v*M/B = {exponent}"
            )));
        }
        Ok(snr * self.noise_n)
    }

    /// Largest linear total loss the power budget `p_t_max` can cover.
    pub fn max_allowable_loss(&self) -> Result<f64> {
        Ok(self.p_t_max / self.power_per_unit_loss()?)
    }
}

/// dB value to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Search box and total-loss ceiling. `l_max = None` means unbounded.
/// Fields omitted when deserializing come from [`SearchBounds::facade_side`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default = "SearchBounds::facade_side", deny_unknown_fields)]
pub struct SearchBounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub l_max: Option<f64>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self::cube(-1000.0, 1000.0)
    }
}

impl SearchBounds {
    pub fn cube(min: f64, max: f64) -> Self {
        Self {
            x_min: min,
            x_max: max,
            y_min: min,
            y_max: max,
            z_min: min,
            z_max: max,
            l_max: None,
        }
    }

    /// The default cube cut at the `x = 0` facade, keeping the UAV on the
    /// side facing the building.
    pub fn facade_side() -> Self {
        Self {
            x_max: 0.0,
            ..Self::default()
        }
    }

    pub fn new(x: (f64, f64), y: (f64, f64), z: (f64, f64)) -> Self {
        Self {
            x_min: x.0,
            x_max: x.1,
            y_min: y.0,
            y_max: y.1,
            z_min: z.0,
            z_max: z.1,
            l_max: None,
        }
    }

    pub fn with_l_max(self, l_max: f64) -> Self {
        Self {
            l_max: Some(l_max),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (axis, lo, hi) in self.axes() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Config(format!("search box: {axis}_min must be below {axis}_max")));
            }
        }
        if let Some(l) = self.l_max {
            if !(l > 0.0) {
                return Err(Error::Config(format!("l_max must be positive, got {l}")));
            }
        }
        Ok(())
    }

    pub fn axes(&self) -> [(char, f64, f64); 3] {
        [
            ('x', self.x_min, self.x_max),
            ('y', self.y_min, self.y_max),
            ('z', self.z_min, self.z_max),
        ]
    }

    pub fn l_max(&self) -> f64 {
        self.l_max.unwrap_or(f64::INFINITY)
    }

    pub fn contains(&self, p: &UavPosition) -> bool {
        (self.x_min..=self.x_max).contains(&p.x)
            && (self.y_min..=self.y_max).contains(&p.y)
            && (self.z_min..=self.z_max).contains(&p.z)
    }
}

/// What the optimizer minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostUnit {
    /// Sum of per-user losses in dB.
    #[default]
    Db,
    /// Sum of per-user linear losses; proportional to total transmit power.
    Linear,
}

impl std::str::FromStr for CostUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "db" => Ok(Self::Db),
            "linear" => Ok(Self::Linear),
            other => Err(Error::Config(format!("unknown cost unit `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub total_loss_db: f64,
    pub per_user_loss: Vec<f64>,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_power_w: Option<f64>,
}

/// Sum of per-user dB losses, users taken in index order.
pub fn total_loss(
    uav: &UavPosition,
    users: &UserSet,
    building: &Building,
    params: &PathLossParams,
    convention: ThetaConvention,
) -> Result<CostReport> {
    let footprint = building.footprint();
    let per_user_loss = users
        .users()
        .iter()
        .map(|u| Ok(path_loss(&link_geometry_in(uav, u, &footprint, convention)?, params)?.l_total))
        .collect::<Result<Vec<_>>>()?;
    Ok(CostReport {
        total_loss_db: per_user_loss.iter().sum(),
        per_user_loss,
        feasible: true,
        total_power_w: None,
    })
}

/// Power needed to give one user rate v over its B/M channel.
pub fn min_power_per_user(loss_db: f64, radio: &RadioConfig) -> Result<f64> {
    if !loss_db.is_finite() {
        return Err(Error::Domain {
            quantity: "loss_db",
            value: loss_db,
        });
    }
    Ok(radio.power_per_unit_loss()? * db_to_linear(loss_db))
}

pub fn total_power(report: &CostReport, radio: &RadioConfig) -> Result<f64> {
    let unit = radio.power_per_unit_loss()?;
    report.per_user_loss.iter().try_fold(0.0, |acc, &l| {
        if !l.is_finite() {
            return Err(Error::Domain {
                quantity: "loss_db",
                value: l,
            });
        }
        Ok(acc + unit * db_to_linear(l))
    })
}

/// Shannon rate in bits/s of one user on its B/M channel.
pub fn rate(loss_db: f64, p_t: f64, radio: &RadioConfig) -> Result<f64> {
    if !(p_t >= 0.0) || !loss_db.is_finite() {
        return Err(Error::Domain {
            quantity: "p_t",
            value: p_t,
        });
    }
    let snr = p_t / db_to_linear(loss_db) / radio.noise_n;
    Ok(radio.channel_bandwidth() * snr.ln_1p() / std::f64::consts::LN_2)
}

/// Everything needed to score a UAV position.
#[derive(Debug, Clone)]
pub struct Objective {
    users: UserSet,
    building: Building,
    footprint: Footprint,
    params: PathLossParams,
    convention: ThetaConvention,
    bounds: SearchBounds,
    unit: CostUnit,
    radio: Option<RadioConfig>,
}

impl Objective {
    pub fn new(users: UserSet, building: Building, params: PathLossParams) -> Result<Self> {
        building.validate()?;
        params.validate()?;
        if users.is_empty() {
            return Err(Error::Config("user set is empty".into()));
        }
        Ok(Self {
            users,
            footprint: building.footprint(),
            building,
            params,
            convention: ThetaConvention::default(),
            bounds: SearchBounds::default(),
            unit: CostUnit::default(),
            radio: None,
        })
    }

    pub fn with_convention(mut self, convention: ThetaConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_bounds(mut self, bounds: SearchBounds) -> Result<Self> {
        bounds.validate()?;
        self.bounds = bounds;
        Ok(self)
    }

    pub fn with_unit(mut self, unit: CostUnit) -> Self {
        self.unit = unit;
        self
    }

    pub fn with_radio(mut self, radio: RadioConfig) -> Result<Self> {
        radio.validate()?;
        if radio.num_users_m != self.users.len() {
            return Err(Error::Config(format!(
                "num_users_m = {} but the user set has {} users",
                radio.num_users_m,
                self.users.len()
            )));
        }
        self.radio = Some(radio);
        Ok(self)
    }

    pub fn users(&self) -> &UserSet {
        &self.users
    }

    pub fn building(&self) -> &Building {
        &self.building
    }

    pub fn bounds(&self) -> &SearchBounds {
        &self.bounds
    }

    pub fn unit(&self) -> CostUnit {
        self.unit
    }

    pub fn convention(&self) -> ThetaConvention {
        self.convention
    }

    fn link_loss(&self, uav: &UavPosition, user: &crate::geometry::Point3) -> Result<f64> {
        let geom = link_geometry_in(uav, user, &self.footprint, self.convention)?;
        Ok(path_loss(&geom, &self.params)?.l_total)
    }

    fn unit_total(&self, uav: &UavPosition) -> Result<f64> {
        let mut total = 0.0;
        for u in self.users.users() {
            let l = self.link_loss(uav, u)?;
            total += match self.unit {
                CostUnit::Db => l,
                CostUnit::Linear => db_to_linear(l),
            };
        }
        Ok(total)
    }

    /// Full report at `uav`, including feasibility against the search box and `l_max`.
    pub fn evaluate(&self, uav: &UavPosition) -> Result<CostReport> {
        let mut report = total_loss(uav, &self.users, &self.building, &self.params, self.convention)?;
        report.feasible = self.bounds.contains(uav) && report.total_loss_db <= self.bounds.l_max();
        if let Some(radio) = &self.radio {
            report.total_power_w = Some(total_power(&report, radio)?);
        }
        Ok(report)
    }

    /// Value minimized by the solvers: the total in the configured unit, or
    /// `+inf` for infeasible or degenerate positions.
    pub fn cost(&self, uav: &UavPosition) -> f64 {
        if !self.bounds.contains(uav) {
            return f64::INFINITY;
        }
        let total = match self.unit_total(uav) {
            Ok(t) => t,
            Err(_) => return f64::INFINITY,
        };
        let db_total = match self.unit {
            CostUnit::Db => total,
            CostUnit::Linear if self.bounds.l_max.is_none() => total,
            CostUnit::Linear => match total_loss(uav, &self.users, &self.building, &self.params, self.convention) {
                Ok(r) => r.total_loss_db,
                Err(_) => return f64::INFINITY,
            },
        };
        if db_total > self.bounds.l_max() {
            f64::INFINITY
        } else {
            total
        }
    }
}
