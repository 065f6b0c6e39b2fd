//! Spatial Poisson point process oracle on a square torus.
//!
//! FAPs and users are independent homogeneous PPPs on an `L x L` window
//! with wrap-around distance. Users attach to an FAP within range; an FAP
//! with at least one candidate is active and serves exactly one of them.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use super::{domains, Estimate, RngSeed};
use crate::error::{check, Result};
use crate::tier_model::{outage_probability, OutageQuery, TierParams};

pub const MIN_REALIZATIONS: usize = 1_000;
/// Expected FAP count per window below which edge effects dominate.
pub const MIN_FAPS_PER_WINDOW: f64 = 50.0;

/// How a user picks among the FAPs within its range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Attachment {
    /// Uniformly at random among in-range FAPs.
    #[default]
    UniformInRange,
    /// The closest FAP, if it is in range.
    Nearest,
}

/// Who interferes with an active FAP's uplink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interferers {
    /// Users being served by the other active FAPs.
    #[default]
    ServedUsers,
    /// Every user other than the FAP's own served user.
    AllUsers,
}

type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct PppRealization {
    pub side: f64,
    pub faps: Vec<Point>,
    pub users: Vec<Point>,
}

impl PppRealization {
    pub fn sample<R: Rng>(d_f: f64, d_u: f64, side: f64, rng: &mut R) -> Self {
        let area = side * side;
        let faps = scatter(rng, d_f * area, side);
        let users = scatter(rng, d_u * area, side);
        PppRealization { side, faps, users }
    }

    pub fn torus_dist2(&self, a: Point, b: Point) -> f64 {
        let wrap = |v: f64| {
            let v = v.abs();
            v.min(self.side - v)
        };
        let dx = wrap(a[0] - b[0]);
        let dy = wrap(a[1] - b[1]);
        dx * dx + dy * dy
    }

    /// For each user, the FAP it attaches to (if any).
    pub fn attach<R: Rng>(&self, r: f64, rule: Attachment, rng: &mut R) -> Vec<Option<usize>> {
        let grid = CellGrid::new(self, r);
        let mut candidates = Vec::new();
        self.users
            .iter()
            .map(|&u| {
                candidates.clear();
                grid.in_range(self, u, r, &mut candidates);
                match rule {
                    Attachment::UniformInRange => candidates.choose(rng).map(|&(i, _)| i),
                    Attachment::Nearest => candidates
                        .iter()
                        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                        .map(|&(i, _)| i),
                }
            })
            .collect()
    }

    /// Served user per FAP, `None` for idle FAPs.
    pub fn serve<R: Rng>(&self, attached: &[Option<usize>], rng: &mut R) -> Vec<Option<usize>> {
        let mut pools: Vec<Vec<usize>> = vec![Vec::new(); self.faps.len()];
        for (user, fap) in attached.iter().enumerate() {
            if let Some(f) = fap {
                pools[*f].push(user);
            }
        }
        pools.iter().map(|p| p.choose(rng).copied()).collect()
    }
}

fn scatter<R: Rng>(rng: &mut R, mean: f64, side: f64) -> Vec<Point> {
    let count = if mean > 0.0 {
        Poisson::new(mean).expect("positive mean").sample(rng) as usize
    } else {
        0
    };
    (0..count)
        .map(|_| [rng.random_range(0.0..side), rng.random_range(0.0..side)])
        .collect()
}

/// Bucket grid over the torus with cells no smaller than the query radius.
struct CellGrid {
    per_side: usize,
    cell: f64,
    buckets: Vec<Vec<usize>>,
}

impl CellGrid {
    fn new(real: &PppRealization, r: f64) -> Self {
        // cells never smaller than r; no finer than ~2 FAPs per cell
        let by_range = (real.side / r).floor().min(1e6) as usize;
        let by_count = (real.faps.len() as f64 / 2.0).sqrt().ceil() as usize;
        let per_side = by_range.min(by_count).max(1);
        let cell = real.side / per_side as f64;
        let mut buckets = vec![Vec::new(); per_side * per_side];
        for (i, p) in real.faps.iter().enumerate() {
            let (cx, cy) = (
                Self::coord(p[0], cell, per_side),
                Self::coord(p[1], cell, per_side),
            );
            buckets[cy * per_side + cx].push(i);
        }
        CellGrid {
            per_side,
            cell,
            buckets,
        }
    }

    fn coord(v: f64, cell: f64, n: usize) -> usize {
        ((v / cell) as usize).min(n - 1)
    }

    /// Pushes `(fap, dist2)` for every FAP within `r` of `p`.
    fn in_range(&self, real: &PppRealization, p: Point, r: f64, out: &mut Vec<(usize, f64)>) {
        let n = self.per_side;
        let r2 = r * r;
        if n < 3 {
            for (i, &f) in real.faps.iter().enumerate() {
                let d2 = real.torus_dist2(p, f);
                if d2 <= r2 {
                    out.push((i, d2));
                }
            }
            return;
        }
        let cx = Self::coord(p[0], self.cell, n);
        let cy = Self::coord(p[1], self.cell, n);
        for dy in [n - 1, 0, 1] {
            for dx in [n - 1, 0, 1] {
                let bucket = &self.buckets[((cy + dy) % n) * n + (cx + dx) % n];
                for &i in bucket {
                    let d2 = real.torus_dist2(p, real.faps[i]);
                    if d2 <= r2 {
                        out.push((i, d2));
                    }
                }
            }
        }
    }
}

fn check_window(d_f: f64, side: f64, reps: usize) -> Result<()> {
    check(
        "window",
        side,
        "d_f * window^2 >= 50",
        side.is_finite() && d_f * side * side >= MIN_FAPS_PER_WINDOW,
    )?;
    check(
        "reps",
        reps as f64,
        "reps >= 1000",
        reps >= MIN_REALIZATIONS,
    )
}

/// Served users per user, pooled over `reps` realizations.
pub fn mc_connectivity_ratio(
    p: &TierParams,
    r: f64,
    side: f64,
    reps: usize,
    seed: RngSeed,
    rule: Attachment,
) -> Result<Estimate> {
    p.validate()?;
    check("r", r, "r > 0", r > 0.0 && r.is_finite())?;
    check_window(p.d_f, side, reps)?;
    let tallies: Vec<(u64, u64)> = (0..reps)
        .into_par_iter()
        .map(|k| {
            let mut rng = seed.stream(domains::PPP_RATIO, k as u64);
            let real = PppRealization::sample(p.d_f, p.d_u, side, &mut rng);
            let attached = real.attach(r, rule, &mut rng);
            let mut busy = vec![false; real.faps.len()];
            for f in attached.iter().flatten() {
                busy[*f] = true;
            }
            let active = busy.iter().filter(|b| **b).count() as u64;
            (active, real.users.len() as u64)
        })
        .collect();
    let (active, users) = tallies
        .iter()
        .fold((0, 0), |(a, u), (da, du)| (a + da, u + du));
    Ok(Estimate::from_counts(active, users, 1.0))
}

/// Simulated outage next to the closed form it is compared with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub estimate: Estimate,
    pub closed_form: f64,
}

impl OutageEstimate {
    pub fn divergence(&self) -> f64 {
        self.estimate.value - self.closed_form
    }
}

fn path_gain(d2: f64, alpha: f64) -> f64 {
    let half = 0.5 * alpha;
    if half.fract() == 0.0 && half <= 16.0 {
        d2.powi(-(half as i32))
    } else {
        d2.powf(-half)
    }
}

/// Fraction of active FAPs whose uplink SIR is at or below the threshold.
pub fn mc_outage(
    q: &OutageQuery,
    side: f64,
    reps: usize,
    seed: RngSeed,
    rule: Attachment,
    interferers: Interferers,
) -> Result<OutageEstimate> {
    let p = q.params;
    check_window(p.d_f, side, reps)?;
    let (r, gamma, alpha) = (q.r(), q.gamma(), p.alpha);
    let tallies: Vec<(u64, u64)> = (0..reps)
        .into_par_iter()
        .map(|k| {
            let mut rng = seed.stream(domains::PPP_OUTAGE, k as u64);
            let real = PppRealization::sample(p.d_f, p.d_u, side, &mut rng);
            let attached = real.attach(r, rule, &mut rng);
            let served = real.serve(&attached, &mut rng);
            let links: Vec<(usize, usize)> = served
                .iter()
                .enumerate()
                .filter_map(|(f, u)| u.map(|u| (f, u)))
                .collect();
            let transmitters: Vec<usize> = match interferers {
                Interferers::ServedUsers => links.iter().map(|&(_, u)| u).collect(),
                Interferers::AllUsers => (0..real.users.len()).collect(),
            };
            let mut outages = 0;
            for &(f, own) in &links {
                let fap = real.faps[f];
                let signal = path_gain(real.torus_dist2(real.users[own], fap), alpha);
                let interference: f64 = transmitters
                    .iter()
                    .filter(|&&u| u != own)
                    .map(|&u| path_gain(real.torus_dist2(real.users[u], fap), alpha))
                    .sum();
                // common transmit power cancels out of the ratio
                let sir = signal / interference;
                if sir <= gamma {
                    outages += 1;
                }
            }
            (outages, links.len() as u64)
        })
        .collect();
    let (outages, active) = tallies
        .iter()
        .fold((0, 0), |(o, a), (dout, dact)| (o + dout, a + dact));
    Ok(OutageEstimate {
        estimate: Estimate::from_counts(outages, active, 1.0),
        closed_form: outage_probability(q),
    })
}
