//! Building model, indoor user layouts and per-link geometry.
//!
//! The building occupies `[0, x_b] x [0, y_b] x [0, z_b]`. The UAV normally
//! hovers at `x < 0`, facing the `x = 0` facade, but any position is accepted.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in meters. Serialized as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Candidate UAV location. Box constraints are the objective's business.
pub type UavPosition = Point3;

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        p.to_array()
    }
}

/// Axis-aligned horizontal rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Footprint {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Footprint {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.x_min..=self.x_max).contains(&x) && (self.y_min..=self.y_max).contains(&y)
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            x_min: self.x_min + dx,
            x_max: self.x_max + dx,
            y_min: self.y_min + dy,
            y_max: self.y_max + dy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Building {
    /// Depth along the axis facing the UAV.
    pub x_b: f64,
    /// Facade width.
    pub y_b: f64,
    pub z_b: f64,
    #[serde(default = "default_floor_height")]
    pub floor_height: f64,
}

fn default_floor_height() -> f64 {
    5.0
}

impl Building {
    pub fn new(x_b: f64, y_b: f64, z_b: f64, floor_height: f64) -> Result<Self> {
        let b = Self {
            x_b,
            y_b,
            z_b,
            floor_height,
        };
        b.validate()?;
        Ok(b)
    }

    /// Building with the default 5 m floors.
    pub fn with_default_floors(x_b: f64, y_b: f64, z_b: f64) -> Result<Self> {
        Self::new(x_b, y_b, z_b, default_floor_height())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("x_b", self.x_b),
            ("y_b", self.y_b),
            ("z_b", self.z_b),
            ("floor_height", self.floor_height),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidBuilding(format!("{name} must be positive, got {v}")));
            }
        }
        let floors = (self.z_b / self.floor_height).round();
        if floors < 1.0 || (floors * self.floor_height - self.z_b).abs() > 1e-9 * self.z_b {
            return Err(Error::InvalidBuilding(
                "z_b not a multiple of floor_height".to_string(),
            ));
        }
        Ok(())
    }

    pub fn floor_count(&self) -> usize {
        (self.z_b / self.floor_height).round() as usize
    }

    /// Height of a user standing on `floor` (mid-floor).
    pub fn user_height(&self, floor: usize) -> f64 {
        floor as f64 * self.floor_height + 0.5 * self.floor_height
    }

    pub fn footprint(&self) -> Footprint {
        Footprint {
            x_min: 0.0,
            x_max: self.x_b,
            y_min: 0.0,
            y_max: self.y_b,
        }
    }

    pub fn contains(&self, p: &Point3) -> bool {
        (0.0..=self.x_b).contains(&p.x) && (0.0..=self.y_b).contains(&p.y) && (0.0..=self.z_b).contains(&p.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    SymmetricGrid,
    UniformPerFloor,
}

impl std::fmt::Display for Distribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Distribution::SymmetricGrid => "symmetric_grid",
            Distribution::UniformPerFloor => "uniform_per_floor",
        })
    }
}

/// Per-floor user grid for the symmetric layout: `nx` columns along x, `ny` along y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridShape {
    pub nx: usize,
    pub ny: usize,
}

impl GridShape {
    /// Most nearly square factorization with `nx <= ny` (20 -> 4 x 5).
    pub fn for_count(users_per_floor: usize) -> Result<Self> {
        if users_per_floor == 0 {
            return Err(Error::Config("users_per_floor must be at least 1".into()));
        }
        let nx = (1..=users_per_floor)
            .take_while(|k| k * k <= users_per_floor)
            .filter(|k| users_per_floor % k == 0)
            .last()
            .unwrap_or(1);
        Ok(Self {
            nx,
            ny: users_per_floor / nx,
        })
    }

    pub fn count(&self) -> usize {
        self.nx * self.ny
    }
}

/// Immutable set of indoor users together with how it was produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserSet {
    users: Vec<Point3>,
    distribution: Distribution,
    users_per_floor: usize,
    seed: u64,
}

impl UserSet {
    pub fn users(&self) -> &[Point3] {
        &self.users
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn distribution(&self) -> Distribution {
        self.distribution
    }

    pub fn users_per_floor(&self) -> usize {
        self.users_per_floor
    }

    /// Seed the positions were drawn with; meaningless for the symmetric grid.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Same set with every user listed twice (used to check sum linearity).
    pub fn duplicated(&self) -> Self {
        let mut users = self.users.clone();
        users.extend_from_slice(&self.users);
        Self {
            users,
            users_per_floor: self.users_per_floor * 2,
            ..self.clone()
        }
    }
}

/// Users at the cell centers of an equal grid on every floor, at mid-floor height.
pub fn generate_symmetric_users(building: &Building, users_per_floor: usize) -> Result<UserSet> {
    generate_symmetric_grid(building, GridShape::for_count(users_per_floor)?)
}

pub fn generate_symmetric_grid(building: &Building, shape: GridShape) -> Result<UserSet> {
    building.validate()?;
    if shape.nx == 0 || shape.ny == 0 {
        return Err(Error::Config(format!(
            "grid {}x{} must have at least one cell per axis",
            shape.nx, shape.ny
        )));
    }
    let floors = building.floor_count();
    let mut users = Vec::with_capacity(floors * shape.count());
    for floor in 0..floors {
        let z = building.user_height(floor);
        for i in 0..shape.nx {
            let x = (i as f64 + 0.5) * building.x_b / shape.nx as f64;
            for j in 0..shape.ny {
                let y = (j as f64 + 0.5) * building.y_b / shape.ny as f64;
                users.push(Point3::new(x, y, z));
            }
        }
    }
    Ok(UserSet {
        users,
        distribution: Distribution::SymmetricGrid,
        users_per_floor: shape.count(),
        seed: 0,
    })
}

/// Users drawn uniformly over each floor's footprint.
///
/// Stream layout: one `ChaCha8Rng` seeded from `seed`; floors in ascending
/// order, and within a floor each user draws `x` then `y`.
pub fn generate_uniform_users(building: &Building, users_per_floor: usize, seed: u64) -> Result<UserSet> {
    building.validate()?;
    if users_per_floor == 0 {
        return Err(Error::Config("users_per_floor must be at least 1".into()));
    }
    let floors = building.floor_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut users = Vec::with_capacity(floors * users_per_floor);
    for floor in 0..floors {
        let z = building.user_height(floor);
        for _ in 0..users_per_floor {
            let x = building.x_b * rng.gen::<f64>();
            let y = building.y_b * rng.gen::<f64>();
            users.push(Point3::new(x, y, z));
        }
    }
    Ok(UserSet {
        users,
        distribution: Distribution::UniformPerFloor,
        users_per_floor,
        seed,
    })
}

/// How the incident angle of a link is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaConvention {
    /// Angle between the line of sight and the horizontal plane.
    #[default]
    Elevation,
    /// Angle between the line of sight and the normal of the face it enters
    /// through (a facade, or the roof/ground slab when the UAV is above or
    /// below the footprint).
    Incidence,
}

impl std::str::FromStr for ThetaConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elevation" => Ok(Self::Elevation),
            "incidence" => Ok(Self::Incidence),
            other => Err(Error::Config(format!("unknown theta convention `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub d_3d: f64,
    /// Degrees in `[0, 90]`.
    pub theta: f64,
    pub d_2d: f64,
}

/// Face of the footprint crossed by the horizontal projection of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryFace {
    /// Projection starts inside (or on the boundary of) the footprint.
    Inside,
    /// Enters through a face of constant x.
    XFace,
    /// Enters through a face of constant y.
    YFace,
}

/// Horizontal length of the indoor part of the link from `from` to `to`,
/// where `to` lies inside `footprint`. Returns the entry face too.
pub fn indoor_distance(from: (f64, f64), to: (f64, f64), footprint: &Footprint) -> (f64, EntryFace) {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let horizontal = dx.hypot(dy);
    if footprint.contains(from.0, from.1) {
        return (horizontal, EntryFace::Inside);
    }
    let mut t_enter = 0.0_f64;
    let mut face = EntryFace::Inside;
    for (p, d, lo, hi, axis_face) in [
        (from.0, dx, footprint.x_min, footprint.x_max, EntryFace::XFace),
        (from.1, dy, footprint.y_min, footprint.y_max, EntryFace::YFace),
    ] {
        if d == 0.0 {
            continue;
        }
        let (ta, tb) = ((lo - p) / d, (hi - p) / d);
        let near = ta.min(tb);
        if near > t_enter {
            t_enter = near;
            face = axis_face;
        }
    }
    (((1.0 - t_enter.min(1.0)) * horizontal).max(0.0), face)
}

/// Distance, incident angle and indoor distance of the UAV -> user link.
pub fn link_geometry(
    uav: &UavPosition,
    user: &Point3,
    building: &Building,
    convention: ThetaConvention,
) -> Result<LinkGeometry> {
    link_geometry_in(uav, user, &building.footprint(), convention)
}

/// [`link_geometry`] against an arbitrary footprint.
pub fn link_geometry_in(
    uav: &UavPosition,
    user: &Point3,
    footprint: &Footprint,
    convention: ThetaConvention,
) -> Result<LinkGeometry> {
    let d_3d = uav.distance(user);
    if d_3d == 0.0 {
        return Err(Error::DegenerateLink {
            x: user.x,
            y: user.y,
            z: user.z,
        });
    }
    let (d_2d, face) = indoor_distance((uav.x, uav.y), (user.x, user.y), footprint);
    let normal_component = match convention {
        ThetaConvention::Elevation => (uav.z - user.z).abs(),
        ThetaConvention::Incidence => match face {
            EntryFace::XFace => (uav.x - user.x).abs(),
            EntryFace::YFace => (uav.y - user.y).abs(),
            EntryFace::Inside => (uav.z - user.z).abs(),
        },
    };
    let ratio = (normal_component / d_3d).min(1.0);
    let theta = match convention {
        ThetaConvention::Elevation => ratio.asin(),
        ThetaConvention::Incidence => ratio.acos(),
    }
    .to_degrees();
    Ok(LinkGeometry { d_3d, theta, d_2d })
}
