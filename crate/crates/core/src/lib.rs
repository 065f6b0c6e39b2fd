//! Connectivity of mobile users in coexisting femtocell/macrocell networks.
//!
//! - [`geometry`]: overlap of a user's communication disk with a unit
//!   femtocell, parameterized by the mobility factor.
//! - [`connectivity`]: disconnectivity bound and connectivity probability
//!   among `n_f` femtocells.
//! - [`tier_model`]: density-based range, serving ratio, SIR, outage and
//!   spectral efficiency.
//! - [`simulate`]: independent Monte Carlo and quadrature oracles.
//! - [`validation`]: oracle-versus-closed-form report.
//! - [`sweep`]: figure recipes, CSV and SVG output.

pub mod connectivity;
pub mod error;
pub mod geometry;
pub mod simulate;
pub mod sweep;
pub mod tier_model;
pub mod validation;

pub use error::{ModelError, Result};
