//! Per-user disconnectivity bound and connectivity probability among `n_f`
//! femtocells.
//!
//! Only the reference femtocell overlaps the user disk, so the union bound
//! over femtocells collapses to a single term
//! `(1 - A(r, beta) / S)^(n_f - 1)` with `S = pi`.

use std::f64::consts::PI;

use crate::error::{check, Result};
use crate::geometry::MobilityGeometry;

/// Area of the unit femtocell disk; normalizes the overlap area.
pub const UNIT_CELL_AREA: f64 = PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectivityScenario {
    pub geometry: MobilityGeometry,
    n_f: u32,
}

impl ConnectivityScenario {
    pub fn new(geometry: MobilityGeometry, n_f: u32) -> Result<Self> {
        check("n_f", n_f as f64, "n_f >= 1", n_f >= 1)?;
        Ok(Self { geometry, n_f })
    }

    pub fn from_parts(r: f64, beta: f64, n_f: u32) -> Result<Self> {
        Self::new(MobilityGeometry::new(r, beta)?, n_f)
    }

    pub fn n_f(&self) -> u32 {
        self.n_f
    }

    /// Probability that a single competing femtocell covers the user.
    pub fn coverage_fraction(&self) -> f64 {
        (self.geometry.lens_area() / UNIT_CELL_AREA).clamp(0.0, 1.0)
    }

    fn log_isolation(&self) -> f64 {
        let exponent = f64::from(self.n_f - 1);
        if exponent == 0.0 {
            return 0.0;
        }
        exponent * (-self.coverage_fraction()).ln_1p()
    }
}

/// `(1 - A/S)^(n_f - 1)`: every other femtocell misses the user.
pub fn isolation_probability(scn: &ConnectivityScenario) -> f64 {
    scn.log_isolation().exp().clamp(0.0, 1.0)
}

/// Upper bound on the probability that the user is disconnected. Numerically
/// the same quantity as [`isolation_probability`].
pub fn disconnectivity_bound(scn: &ConnectivityScenario) -> f64 {
    isolation_probability(scn)
}

/// Complement of the disconnectivity bound.
pub fn connectivity_probability(scn: &ConnectivityScenario) -> f64 {
    // -expm1 keeps precision when the bound is close to 1
    (-scn.log_isolation().exp_m1()).clamp(0.0, 1.0)
}

/// Natural log of the disconnectivity bound. Stays strictly ordered where
/// the probabilities themselves saturate at 0 or 1 in `f64`.
pub fn log_disconnectivity_bound(scn: &ConnectivityScenario) -> f64 {
    scn.log_isolation()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scn(r: f64, beta: f64, n_f: u32) -> ConnectivityScenario {
        ConnectivityScenario::from_parts(r, beta, n_f).unwrap()
    }

    // 40-digit evaluation of 3^99 / 4^99
    const THREE_QUARTERS_POW_99: f64 = 4.276269580508672e-13;
    // adaptive quadrature of the overlap at r = 0.5, beta = 0, 30 digits
    const LENS_HALF_ZERO: f64 = 0.350766609921434687760322762676;

    #[test]
    fn single_femtocell_is_always_isolated() {
        for (r, beta) in [(0.5, 0.0), (0.2, -3.0), (0.9, 2.0)] {
            let s = scn(r, beta, 1);
            assert_eq!(isolation_probability(&s), 1.0);
            assert_eq!(connectivity_probability(&s), 0.0);
        }
    }

    #[test]
    fn zero_femtocells_rejected() {
        assert!(ConnectivityScenario::from_parts(0.5, 0.0, 0).is_err());
    }

    #[test]
    fn fully_inside_two_cells() {
        for r in [0.1, 0.5, 0.8] {
            let p = isolation_probability(&scn(r, -1.0, 2));
            assert!((p - (1.0 - r * r)).abs() < 1e-14);
        }
    }

    #[test]
    fn half_range_at_zero_beta() {
        let expected = (1.0 - LENS_HALF_ZERO / PI).powi(9);
        let got = isolation_probability(&scn(0.5, 0.0, 10));
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
        assert!((got - 0.34454507766976833).abs() < 1e-13);
    }

    #[test]
    fn outside_bound_is_one() {
        for n_f in [1, 2, 100, 10_000] {
            assert_eq!(disconnectivity_bound(&scn(0.5, 1.0, n_f)), 1.0);
            assert_eq!(disconnectivity_bound(&scn(0.5, 4.0, n_f)), 1.0);
            assert_eq!(connectivity_probability(&scn(0.5, 1.0, n_f)), 0.0);
        }
    }

    #[test]
    fn fully_inside_hundred_cells() {
        let s = scn(0.5, -1.0, 100);
        let bound = disconnectivity_bound(&s);
        assert!((bound - THREE_QUARTERS_POW_99).abs() / THREE_QUARTERS_POW_99 < 1e-12);
        let pc = connectivity_probability(&s);
        assert!((pc - (1.0 - THREE_QUARTERS_POW_99)).abs() < 1e-15);
    }

    #[test]
    fn range_near_unity_drives_bound_to_zero() {
        let b = disconnectivity_bound(&scn(1.0 - 1e-9, -1.0, 2));
        assert!(b < 1e-8);
    }

    #[test]
    fn complements_sum_to_one() {
        for r in [0.1, 0.45, 0.9] {
            for beta in [-1.0, -0.3, 0.0, 0.7] {
                for n_f in [2, 10, 100, 10_000] {
                    let s = scn(r, beta, n_f);
                    let sum = connectivity_probability(&s) + disconnectivity_bound(&s);
                    assert!((sum - 1.0).abs() <= 2.0 * f64::EPSILON);
                }
            }
        }
    }
}
