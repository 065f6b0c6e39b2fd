//! Overlap between a user's communication disk and the unit femtocell disk.
//!
//! Lengths are normalized so that the femtocell coverage radius is 1. The
//! user sits at the origin with communication range `r`; the femtocell is
//! centered on the positive x axis at distance `d = 1 + beta * r`, where
//! `beta` is the mobility factor. `beta >= 1` puts the user disk entirely
//! outside the femtocell, `beta <= -1` entirely inside.

use std::f64::consts::PI;

use crate::error::{check, ModelError, Result};

/// One user disk against one reference femtocell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityGeometry {
    r: f64,
    beta: f64,
}

/// How the user disk sits relative to the femtocell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Outside,
    Intersecting,
    Inside,
}

impl MobilityGeometry {
    pub fn new(r: f64, beta: f64) -> Result<Self> {
        check_range(r)?;
        check("beta", beta, "finite", beta.is_finite())?;
        Ok(Self { r, beta })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn distance(&self) -> f64 {
        1.0 + self.beta * self.r
    }

    /// Classification is done on `beta` so the seams sit exactly at +-1.
    pub fn placement(&self) -> Placement {
        if self.beta >= 1.0 {
            Placement::Outside
        } else if self.beta <= -1.0 {
            Placement::Inside
        } else {
            Placement::Intersecting
        }
    }

    /// Chord abscissa, `None` unless the circles properly intersect.
    pub fn chord_abscissa(&self) -> Option<f64> {
        match self.placement() {
            Placement::Intersecting => Some(raw_abscissa(self.r, self.distance())),
            _ => None,
        }
    }

    pub fn lens_area(&self) -> f64 {
        match self.placement() {
            Placement::Outside => 0.0,
            Placement::Inside => PI * self.r * self.r,
            Placement::Intersecting => {
                let area = intersecting_area(self.r, self.distance());
                area.clamp(0.0, PI * self.r * self.r)
            }
        }
    }
}

pub(crate) fn check_range(r: f64) -> Result<()> {
    check("r", r, "0 < r < 1", r > 0.0 && r < 1.0)
}

/// Center-to-center distance `1 + beta * r`.
pub fn center_distance(r: f64, beta: f64) -> Result<f64> {
    Ok(MobilityGeometry::new(r, beta)?.distance())
}

/// Abscissa `x0 = (r^2 + d^2 - 1) / (2d)` of the common chord of the
/// circles `x^2 + y^2 = r^2` and `(x - d)^2 + y^2 = 1`.
pub fn chord_abscissa(r: f64, d: f64) -> Result<f64> {
    check("r", r, "r > 0", r > 0.0 && r.is_finite())?;
    if !((1.0 - r).abs() < d && d < 1.0 + r) {
        return Err(ModelError::NoIntersection { r, d });
    }
    Ok(raw_abscissa(r, d))
}

/// Area of the intersection of the user disk with the unit femtocell disk.
///
/// Piecewise in `beta`: zero outside, `pi r^2` inside, and in between the
/// closed form built from the chord abscissa.
pub fn lens_area(r: f64, beta: f64) -> Result<f64> {
    Ok(MobilityGeometry::new(r, beta)?.lens_area())
}

fn raw_abscissa(r: f64, d: f64) -> f64 {
    (r * r + d * d - 1.0) / (2.0 * d)
}

fn intersecting_area(r: f64, d: f64) -> f64 {
    let x0 = raw_abscissa(r, d);
    // offset of the chord from the femtocell center
    let u = d - x0;
    let r2 = r * r;
    PI * (1.0 + r2) / 2.0
        - x0 * (r2 - x0 * x0).max(0.0).sqrt()
        - u * (1.0 - u * u).max(0.0).sqrt()
        - u.clamp(-1.0, 1.0).asin()
        - r2 * (x0 / r).clamp(-1.0, 1.0).asin()
}
