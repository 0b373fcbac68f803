//! ITU outdoor-to-indoor path loss: free space + building penetration + indoor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LinkGeometry;

/// Model coefficients. Defaults: w = 20, g1 = 32.4, g2 = 14, g3 = 15, g4 = 0.5, 2 GHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathLossParams {
    /// Distance/frequency coefficient (not the PSO inertia weight).
    pub w: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    /// dB per meter of indoor travel.
    pub g4: f64,
    pub f_ghz: f64,
}

impl Default for PathLossParams {
    fn default() -> Self {
        Self {
            w: 20.0,
            g1: 32.4,
            g2: 14.0,
            g3: 15.0,
            g4: 0.5,
            f_ghz: 2.0,
        }
    }
}

impl PathLossParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.w, self.g1, self.g2, self.g3, self.g4, self.f_ghz];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("path-loss parameters must be finite".into()));
        }
        if self.f_ghz <= 0.0 {
            return Err(Error::Config(format!("f_ghz must be positive, got {}", self.f_ghz)));
        }
        Ok(())
    }

    /// `w * log10(f) + g1`, the distance-independent part of the free-space term.
    pub fn free_space_offset(&self) -> f64 {
        self.w * self.f_ghz.log10() + self.g1
    }
}

/// Loss components of a single link, all in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossBreakdown {
    pub l_f: f64,
    pub l_b: f64,
    pub l_i: f64,
    pub l_total: f64,
}

pub fn free_space_loss(d_3d: f64, params: &PathLossParams) -> Result<f64> {
    if !(d_3d > 0.0) {
        return Err(Error::Domain {
            quantity: "d_3d",
            value: d_3d,
        });
    }
    Ok(params.w * d_3d.log10() + params.w * params.f_ghz.log10() + params.g1)
}

/// `g2 + g3 (1 - cos theta)^2`, theta in degrees.
pub fn building_penetration_loss(theta: f64, params: &PathLossParams) -> Result<f64> {
    if !(0.0..=90.0).contains(&theta) {
        return Err(Error::Domain {
            quantity: "theta",
            value: theta,
        });
    }
    let c = 1.0 - theta.to_radians().cos();
    Ok(params.g2 + params.g3 * c * c)
}

pub fn indoor_loss(d_2d: f64, params: &PathLossParams) -> Result<f64> {
    if !(d_2d >= 0.0) {
        return Err(Error::Domain {
            quantity: "d_2d",
            value: d_2d,
        });
    }
    Ok(params.g4 * d_2d)
}

pub fn path_loss(geom: &LinkGeometry, params: &PathLossParams) -> Result<LossBreakdown> {
    let l_f = free_space_loss(geom.d_3d, params)?;
    let l_b = building_penetration_loss(geom.theta, params)?;
    let l_i = indoor_loss(geom.d_2d, params)?;
    Ok(LossBreakdown {
        l_f,
        l_b,
        l_i,
        l_total: l_f + l_b + l_i,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{link_geometry, Building, Point3, ThetaConvention};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    fn at_ghz(f_ghz: f64) -> PathLossParams {
        PathLossParams {
            f_ghz,
            ..Default::default()
        }
    }

    #[test]
    fn free_space_examples() {
        let p = PathLossParams::default();
        assert_relative_eq!(free_space_loss(1.0, &p).unwrap(), 38.420_599_913_279_62, max_relative = TOL);
        assert_relative_eq!(free_space_loss(10.0, &at_ghz(1.0)).unwrap(), 52.4, max_relative = TOL);
        assert_relative_eq!(free_space_loss(100.0, &p).unwrap(), 78.420_599_913_279_62, max_relative = TOL);
        assert!(free_space_loss(0.0, &p).is_err());
        assert!(free_space_loss(-3.0, &p).is_err());
        // below 1 m the formula is applied as-is
        assert!(free_space_loss(0.01, &at_ghz(1.0)).unwrap() < 32.4);
    }

    #[test]
    fn penetration_examples() {
        let p = PathLossParams::default();
        assert_eq!(building_penetration_loss(0.0, &p).unwrap(), 14.0);
        assert_relative_eq!(building_penetration_loss(90.0, &p).unwrap(), 29.0, max_relative = TOL);
        assert_relative_eq!(building_penetration_loss(60.0, &p).unwrap(), 17.75, max_relative = TOL);
        assert!(building_penetration_loss(-0.1, &p).is_err());
        assert!(building_penetration_loss(90.1, &p).is_err());
    }

    #[test]
    fn indoor_examples() {
        let p = PathLossParams::default();
        assert_eq!(indoor_loss(0.0, &p).unwrap(), 0.0);
        assert_eq!(indoor_loss(10.0, &p).unwrap(), 5.0);
        assert_eq!(indoor_loss(20.0, &p).unwrap(), 10.0);
        assert!(indoor_loss(-1.0, &p).is_err());
    }

    #[test]
    fn path_loss_examples() {
        let g = LinkGeometry {
            d_3d: 40.0,
            theta: 0.0,
            d_2d: 10.0,
        };
        let l = path_loss(&g, &PathLossParams::default()).unwrap();
        assert_relative_eq!(l.l_f, 70.461_799_739_838_87, max_relative = TOL);
        assert_eq!(l.l_b, 14.0);
        assert_eq!(l.l_i, 5.0);
        assert_relative_eq!(l.l_total, 89.461_799_739_838_87, max_relative = TOL);
        assert_eq!(l.l_total, l.l_f + l.l_b + l.l_i);

        let unit = LinkGeometry {
            d_3d: 1.0,
            theta: 0.0,
            d_2d: 0.0,
        };
        assert_relative_eq!(path_loss(&unit, &at_ghz(1.0)).unwrap().l_total, 46.4, max_relative = TOL);
    }

    #[test]
    fn free_space_vs_penetration_tradeoff() {
        let b = Building::with_default_floors(20.0, 50.0, 200.0).unwrap();
        let user = Point3::new(10.0, 25.0, 152.5);
        let p = PathLossParams::default();
        let mut prev: Option<LossBreakdown> = None;
        for step in 1..=60 {
            let uav = Point3::new(-(step as f64) * 2.0, 25.0, 60.0);
            let l = path_loss(&link_geometry(&uav, &user, &b, ThetaConvention::Elevation).unwrap(), &p).unwrap();
            if let Some(prev) = prev {
                assert!(l.l_f > prev.l_f);
                assert!(l.l_b < prev.l_b);
            }
            prev = Some(l);
        }
    }

    proptest! {
        #[test]
        fn doubling_distance_adds_w_log2(d in 1e-3..1e4f64, theta in 0.0..=90.0f64, d2 in 0.0..100.0f64) {
            let p = PathLossParams::default();
            let a = path_loss(&LinkGeometry { d_3d: d, theta, d_2d: d2 }, &p).unwrap();
            let b = path_loss(&LinkGeometry { d_3d: 2.0 * d, theta, d_2d: d2 }, &p).unwrap();
            prop_assert!((b.l_total - a.l_total - 20.0 * 2f64.log10()).abs() < 1e-9);
        }

        #[test]
        fn monotone_components(d in 1e-3..1e4f64, f in 0.1..10.0f64, t in 0.01..89.9f64, d2 in 0.0..100.0f64) {
            let p = at_ghz(f);
            prop_assert!(free_space_loss(d * 1.01, &p).unwrap() > free_space_loss(d, &p).unwrap());
            prop_assert!(free_space_loss(d, &at_ghz(f * 1.01)).unwrap() > free_space_loss(d, &p).unwrap());
            prop_assert!(building_penetration_loss(t + 0.05, &p).unwrap() > building_penetration_loss(t, &p).unwrap());
            let li = indoor_loss(d2, &p).unwrap();
            prop_assert!((indoor_loss(2.0 * d2, &p).unwrap() - 2.0 * li).abs() < 1e-12);
        }

        #[test]
        fn component_ranges(d in 1.0..1e4f64, theta in 0.0..=90.0f64, d2 in 0.0..100.0f64) {
            let p = PathLossParams::default();
            let l = path_loss(&LinkGeometry { d_3d: d, theta, d_2d: d2 }, &p).unwrap();
            prop_assert!(l.l_b >= p.g2 && l.l_b <= p.g2 + p.g3);
            prop_assert!(l.l_i >= 0.0);
            prop_assert!(l.l_total >= p.g1 + p.g2);
        }
    }
}
