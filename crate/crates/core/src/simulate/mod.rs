//! Monte Carlo and quadrature oracles for the closed forms.
//!
//! Every random stream is derived from an [`RngSeed`], a domain tag and an
//! index, so results do not depend on how work is scheduled across threads.

mod coverage;
mod ppp;
pub mod quadrature;

pub use coverage::{mc_disconnectivity, mc_lens_area, MIN_TRIALS};
pub use ppp::{
    mc_connectivity_ratio, mc_outage, Attachment, Interferers, OutageEstimate, PppRealization,
    MIN_FAPS_PER_WINDOW, MIN_REALIZATIONS,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl Default for RngSeed {
    fn default() -> Self {
        RngSeed(42)
    }
}

impl RngSeed {
    /// Independent stream `index` within oracle `domain`.
    pub fn stream(self, domain: u64, index: u64) -> ChaCha8Rng {
        let key = self.0 ^ domain.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream(index);
        rng
    }
}

/// A frequency-based estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl Estimate {
    /// `scale * k / n` with standard error `scale * sqrt(p(1-p)/n)`.
    pub fn from_counts(hits: u64, n: u64, scale: f64) -> Self {
        let p = if n == 0 { 0.0 } else { hits as f64 / n as f64 };
        let se = if n == 0 {
            0.0
        } else {
            (p * (1.0 - p) / n as f64).sqrt()
        };
        Estimate {
            value: scale * p,
            std_error: scale * se,
            samples: n,
        }
    }

    /// Distance to `reference` in standard errors. A zero standard error is
    /// floored at the estimator's resolution `scale / n`.
    pub fn z_score(&self, reference: f64, scale: f64) -> f64 {
        let resolution = if self.samples == 0 {
            f64::INFINITY
        } else {
            scale.abs() / self.samples as f64
        };
        (self.value - reference).abs() / self.std_error.max(resolution)
    }
}

pub(crate) mod domains {
    pub const LENS: u64 = 1;
    pub const COVERAGE: u64 = 2;
    pub const PPP_RATIO: u64 = 3;
    pub const PPP_OUTAGE: u64 = 4;
    pub const VALIDATION_POINTS: u64 = 5;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_replay() {
        let a: Vec<u64> = (0..8).map(|_| RngSeed(7).stream(1, 3).random()).collect();
        let b: Vec<u64> = (0..8).map(|_| RngSeed(7).stream(1, 3).random()).collect();
        assert_eq!(a, b);
        let x: u64 = RngSeed(7).stream(1, 3).random();
        assert_ne!(x, RngSeed(7).stream(1, 4).random::<u64>());
        assert_ne!(x, RngSeed(7).stream(2, 3).random::<u64>());
        assert_ne!(x, RngSeed(8).stream(1, 3).random::<u64>());
    }

    #[test]
    fn binomial_error() {
        let e = Estimate::from_counts(25, 100, 2.0);
        assert_eq!(e.value, 0.5);
        assert!((e.std_error - 2.0 * (0.1875f64 / 100.0).sqrt()).abs() < 1e-15);
        let certain = Estimate::from_counts(100, 100, 1.0);
        assert_eq!(certain.std_error, 0.0);
        assert_eq!(certain.z_score(1.0, 1.0), 0.0);
        assert!((certain.z_score(0.99, 1.0) - 1.0).abs() < 1e-12);
    }
}
