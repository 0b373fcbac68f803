//! Fixtures shared by the criterion benchmarks in `benches/`.

use uavplace_core::harness::Scenario;
use uavplace_core::{Building, Distribution, Objective};

/// 20 x 50 building of the given height, 20 users per floor.
pub fn scenario(z_b: f64, distribution: Distribution) -> Scenario {
    let building = Building::with_default_floors(20.0, 50.0, z_b).expect("valid building");
    let mut s = Scenario::for_building(building);
    s.users.distribution = distribution;
    s.users.seed = 1;
    s
}

pub fn objective(z_b: f64, distribution: Distribution) -> Objective {
    scenario(z_b, distribution).objective().expect("valid objective")
}
