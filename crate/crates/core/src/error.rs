use thiserror::Error;

/// Errors raised by the analytical model and the Monte Carlo oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("circles do not intersect: r = {r}, d = {d}")]
    NoIntersection { r: f64, d: f64 },
    #[error("SIR undefined: no interferers and zero noise power")]
    EmptyInterference,
    #[error("no spectral efficiency meets target outage {target}: outage at the smallest rate is already {floor}")]
    NoSolution { target: f64, floor: f64 },
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

pub(crate) fn check(
    name: &'static str,
    value: f64,
    expected: &'static str,
    ok: bool,
) -> Result<()> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(ModelError::Domain {
            name,
            value,
            expected,
        })
    }
}
