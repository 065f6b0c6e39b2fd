//! Hit-or-miss overlap area and Bernoulli coverage oracles.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use super::{domains, Estimate, RngSeed};
use crate::connectivity::ConnectivityScenario;
use crate::error::{check, Result};
use crate::geometry::{check_range, MobilityGeometry};

pub const MIN_TRIALS: u64 = 10_000;
const CHUNK: u64 = 1 << 16;

fn chunks(n: u64) -> impl ParallelIterator<Item = (u64, u64)> {
    let count = n.div_ceil(CHUNK);
    (0..count)
        .into_par_iter()
        .map(move |i| (i, CHUNK.min(n - i * CHUNK)))
}

/// Uniform point in the disk of radius `radius` centered at the origin.
fn point_in_disk<R: Rng>(rng: &mut R, radius: f64) -> (f64, f64) {
    loop {
        let x = rng.random_range(-1.0..1.0);
        let y = rng.random_range(-1.0..1.0);
        if x * x + y * y <= 1.0 {
            return (radius * x, radius * y);
        }
    }
}

/// Estimate the overlap of the user disk (radius `r`, origin) with the unit
/// femtocell at `d = 1 + beta r` by sampling the user disk.
pub fn mc_lens_area(r: f64, beta: f64, n: u64, seed: RngSeed) -> Result<Estimate> {
    check_range(r)?;
    check("beta", beta, "-1 < beta < 1", beta > -1.0 && beta < 1.0)?;
    check("n", n as f64, "n >= 10^4", n >= MIN_TRIALS)?;
    let d = 1.0 + beta * r;
    let hits: u64 = chunks(n)
        .map(|(i, len)| {
            let mut rng = seed.stream(domains::LENS, i);
            (0..len)
                .filter(|_| {
                    let (x, y) = point_in_disk(&mut rng, r);
                    (x - d) * (x - d) + y * y <= 1.0
                })
                .count() as u64
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    Ok(Estimate::from_counts(hits, n, PI * r * r))
}

/// Estimate the probability that none of the `n_f - 1` competing
/// femtocells covers the user.
///
/// A femtocell covers the user when a uniform point of its unit disk lands
/// inside the user's communication disk, which happens with probability
/// equal to the overlap fraction.
pub fn mc_disconnectivity(scn: &ConnectivityScenario, n: u64, seed: RngSeed) -> Result<Estimate> {
    check("n", n as f64, "n >= 10^4", n >= MIN_TRIALS)?;
    let geometry: MobilityGeometry = scn.geometry;
    let (r, d) = (geometry.r(), geometry.distance());
    let others = scn.n_f() - 1;
    let isolated: u64 = chunks(n)
        .map(|(i, len)| {
            let mut rng = seed.stream(domains::COVERAGE, i);
            (0..len)
                .filter(|_| {
                    !(0..others).any(|_| {
                        let (x, y) = point_in_disk(&mut rng, 1.0);
                        let (px, py) = (x + d, y);
                        px * px + py * py <= r * r
                    })
                })
                .count() as u64
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    Ok(Estimate::from_counts(isolated, n, 1.0))
}
