//! Density-based two-tier model: communication range from the power budget,
//! the fraction of users an FAP can serve, signal-to-interference ratio and
//! outage, and the map between spectral efficiency and SIR threshold.
//!
//! Densities are per unit area where the femtocell radius is the unit of
//! length. The channel is pure distance-dependent path loss with exponent
//! `alpha > 2`; no fading or shadowing.

use std::f64::consts::PI;

use crate::error::{check, ModelError, Result};

/// Upper end of the spectral-efficiency search bracket, bits/s/Hz.
pub const MAX_SPECTRAL_EFFICIENCY: f64 = 64.0;
/// Smallest rate the solver resolves; also its bracketing tolerance.
pub const MIN_SPECTRAL_EFFICIENCY: f64 = 1e-9;
const BISECTION_WIDTH: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierParams {
    /// FAPs per unit area.
    pub d_f: f64,
    /// Users per unit area.
    pub d_u: f64,
    /// User transmit power, linear.
    pub p_t: f64,
    /// FAP sensitivity, linear.
    pub p_min: f64,
    /// Path-loss exponent.
    pub alpha: f64,
}

impl TierParams {
    pub fn new(d_f: f64, d_u: f64, p_t: f64, p_min: f64, alpha: f64) -> Result<Self> {
        let p = Self {
            d_f,
            d_u,
            p_t,
            p_min,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        positive("d_f", self.d_f)?;
        positive("d_u", self.d_u)?;
        positive("p_t", self.p_t)?;
        positive("p_min", self.p_min)?;
        check(
            "alpha",
            self.alpha,
            "finite alpha > 2",
            self.alpha > 2.0 && self.alpha.is_finite(),
        )
    }

    pub fn with_densities(self, d_f: f64, d_u: f64) -> Result<Self> {
        Self::new(d_f, d_u, self.p_t, self.p_min, self.alpha)
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    check(name, v, "finite and > 0", v > 0.0 && v.is_finite())
}

/// Reverse-link range `(p_t / p_min)^(1/alpha)`.
pub fn communication_range(p: &TierParams) -> f64 {
    (p.p_t / p.p_min).powf(1.0 / p.alpha)
}

/// Probability that a user has at least one FAP within range `r`.
fn in_range_fraction(d_f: f64, r: f64) -> f64 {
    -(-d_f * PI * r * r).exp_m1()
}

/// Density of FAPs with at least one user to serve.
pub fn active_fap_density(p: &TierParams, r: f64) -> Result<f64> {
    positive("r", r)?;
    let load = p.d_u / p.d_f * in_range_fraction(p.d_f, r);
    Ok((p.d_f * -(-load).exp_m1()).clamp(0.0, p.d_f.min(p.d_u)))
}

/// Fraction of users served by an FAP, `D_f,active / D_u`.
pub fn connectivity_ratio(p: &TierParams, r: f64) -> Result<f64> {
    Ok((active_fap_density(p, r)? / p.d_u).clamp(0.0, 1.0))
}

/// Distances seen at a reference FAP: its own user and the interferers.
#[derive(Debug, Clone, PartialEq)]
pub struct SirSample {
    pub r0: f64,
    pub interferer_distances: Vec<f64>,
    pub noise_power: f64,
}

impl SirSample {
    /// Interference-limited sample (zero noise).
    pub fn new(r0: f64, interferer_distances: Vec<f64>) -> Self {
        Self {
            r0,
            interferer_distances,
            noise_power: 0.0,
        }
    }
}

pub fn sir(s: &SirSample, p: &TierParams) -> Result<f64> {
    positive("r0", s.r0)?;
    for &ri in &s.interferer_distances {
        positive("interferer distance", ri)?;
    }
    check(
        "noise_power",
        s.noise_power,
        "finite and >= 0",
        s.noise_power >= 0.0 && s.noise_power.is_finite(),
    )?;
    if s.interferer_distances.is_empty() && s.noise_power == 0.0 {
        return Err(ModelError::EmptyInterference);
    }
    let signal = p.p_t * s.r0.powf(-p.alpha);
    let interference: f64 = s
        .interferer_distances
        .iter()
        .map(|ri| p.p_t * ri.powf(-p.alpha))
        .sum();
    Ok(signal / (s.noise_power + interference))
}

/// SIR threshold that supports `eta` bits/s/Hz: `2^eta - 1`.
pub fn sir_threshold(eta: f64) -> Result<f64> {
    check("eta", eta, "finite and >= 0", eta >= 0.0 && eta.is_finite())?;
    Ok(eta.exp2() - 1.0)
}

/// Inverse of [`sir_threshold`].
pub fn spectral_efficiency_from_threshold(gamma: f64) -> f64 {
    gamma.ln_1p() / std::f64::consts::LN_2
}

/// Inputs to the outage closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageQuery {
    pub params: TierParams,
    gamma: f64,
    r: f64,
    d_f_active_override: Option<f64>,
}

impl OutageQuery {
    /// Query at SIR threshold `gamma` with range `r`.
    pub fn with_gamma(params: TierParams, gamma: f64, r: f64) -> Result<Self> {
        params.validate()?;
        check(
            "gamma",
            gamma,
            "finite and >= 0",
            gamma >= 0.0 && gamma.is_finite(),
        )?;
        positive("r", r)?;
        Ok(Self {
            params,
            gamma,
            r,
            d_f_active_override: None,
        })
    }

    /// Query at spectral efficiency `eta`, range from the power budget.
    pub fn with_eta(params: TierParams, eta: f64) -> Result<Self> {
        Self::with_gamma(params, sir_threshold(eta)?, communication_range(&params))
    }

    pub fn with_range(self, r: f64) -> Result<Self> {
        positive("r", r)?;
        Ok(Self { r, ..self })
    }

    /// Replace the derived active-FAP density, for sensitivity studies.
    pub fn with_active_density(self, d_f_active: f64) -> Result<Self> {
        let cap = self.params.d_f.min(self.params.d_u);
        check(
            "d_f_active",
            d_f_active,
            "0 <= d_f_active <= min(d_f, d_u)",
            (0.0..=cap).contains(&d_f_active),
        )?;
        Ok(Self {
            d_f_active_override: Some(d_f_active),
            ..self
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eta(&self) -> f64 {
        spectral_efficiency_from_threshold(self.gamma)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn d_f_active(&self) -> f64 {
        match self.d_f_active_override {
            Some(v) => v,
            None => active_fap_density(&self.params, self.r).expect("range validated"),
        }
    }
}

/// Probability that an active FAP sees SIR at or below the threshold.
pub fn outage_probability(q: &OutageQuery) -> f64 {
    let p = &q.params;
    let d_fa = q.d_f_active();
    let gamma_term = if q.gamma == 0.0 {
        0.0
    } else {
        q.gamma.powf(2.0 / p.alpha)
    };
    let k = d_fa * gamma_term + p.d_f;
    let area = PI * q.r * q.r;
    let served = p.d_f * -(-k * area).exp_m1() / (k * -(-p.d_f * area).exp_m1());
    (1.0 - served).clamp(0.0, 1.0)
}

/// Largest spectral efficiency whose outage stays at or below `target`.
///
/// Bisects on `eta` over `[MIN_SPECTRAL_EFFICIENCY, MAX_SPECTRAL_EFFICIENCY]`;
/// if the whole bracket is feasible the cap is returned.
pub fn spectral_efficiency_for_outage(p: &TierParams, r: f64, target: f64) -> Result<f64> {
    p.validate()?;
    positive("r", r)?;
    check(
        "target_outage",
        target,
        "0 <= target < 1",
        (0.0..1.0).contains(&target),
    )?;
    let outage_at = |eta: f64| -> Result<f64> {
        let q = OutageQuery::with_gamma(*p, sir_threshold(eta)?, r)?;
        Ok(outage_probability(&q))
    };
    let floor = outage_at(MIN_SPECTRAL_EFFICIENCY)?;
    if floor > target {
        return Err(ModelError::NoSolution { target, floor });
    }
    if outage_at(MAX_SPECTRAL_EFFICIENCY)? <= target {
        return Ok(MAX_SPECTRAL_EFFICIENCY);
    }
    let (mut lo, mut hi) = (MIN_SPECTRAL_EFFICIENCY, MAX_SPECTRAL_EFFICIENCY);
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if outage_at(mid)? <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
