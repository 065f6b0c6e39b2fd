use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{format_number, SpecError, SweepError, SweepSpec, SweepTarget};
use crate::connectivity::{connectivity_probability, disconnectivity_bound, ConnectivityScenario};
use crate::error::ModelError;
use crate::simulate::RngSeed;
use crate::tier_model::{
    active_fap_density, communication_range, connectivity_ratio, outage_probability, sir_threshold,
    spectral_efficiency_for_outage, OutageQuery, TierParams,
};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: RngSeed,
    /// Recorded in the metadata when present; omitted by default so that
    /// repeated runs are byte-identical.
    pub timestamp: Option<String>,
}

/// Swept columns followed by metric columns, one row per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn check(&self) -> Result<(), SweepError> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(SweepError::InvalidResult {
                    row: i,
                    reason: format!("{} values for {} columns", row.len(), self.columns.len()),
                });
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(SweepError::InvalidResult {
                    row: i,
                    reason: format!("non-finite value {v}"),
                });
            }
        }
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

type Point = BTreeMap<&'static str, f64>;

fn tier_params(pt: &Point) -> Result<TierParams, ModelError> {
    TierParams::new(pt["d_f"], pt["d_u"], pt["p_t"], pt["p_min"], pt["alpha"])
}

fn range_of(pt: &Point, p: &TierParams) -> f64 {
    pt.get("r")
        .copied()
        .unwrap_or_else(|| communication_range(p))
}

fn evaluate(target: SweepTarget, pt: &Point) -> Result<Vec<f64>, ModelError> {
    Ok(match target {
        SweepTarget::ConnectivityVsRBeta => {
            let scn = ConnectivityScenario::from_parts(pt["r"], pt["beta"], pt["n_f"] as u32)?;
            vec![connectivity_probability(&scn), disconnectivity_bound(&scn)]
        }
        SweepTarget::PcVsDu => {
            let p = tier_params(pt)?;
            let r = range_of(pt, &p);
            vec![r, connectivity_ratio(&p, r)?, active_fap_density(&p, r)?]
        }
        SweepTarget::OutageVsDf => {
            let p = tier_params(pt)?;
            let r = range_of(pt, &p);
            let gamma = match pt.get("gamma") {
                Some(g) => *g,
                None => sir_threshold(pt["eta"])?,
            };
            let mut q = OutageQuery::with_gamma(p, gamma, r)?;
            if let Some(d) = pt.get("d_f_active") {
                q = q.with_active_density(*d)?;
            }
            vec![r, gamma, q.d_f_active(), outage_probability(&q)]
        }
        SweepTarget::EtaVsDu => {
            let p = tier_params(pt)?;
            let r = range_of(pt, &p);
            let eta = spectral_efficiency_for_outage(&p, r, pt["target_outage"])?;
            vec![r, eta, sir_threshold(eta)?]
        }
    })
}

fn describe(pt: &Point, swept: &[(&'static str, Vec<f64>)]) -> String {
    swept
        .iter()
        .map(|(k, _)| format!("{k}={}", format_number(pt[k])))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Evaluates the target metric at every grid point, in grid order.
pub fn run_sweep(spec: &SweepSpec, opts: &RunOptions) -> Result<SweepResult, SweepError> {
    spec.validate()?;
    let swept = spec.swept();
    let mut base: Point = BTreeMap::new();
    for p in spec.target.params() {
        if let Some(v) = spec.fixed.get(p.name) {
            base.insert(p.name, *v);
        }
    }
    let total: usize = swept.iter().map(|(_, v)| v.len()).product();
    if total == 0 {
        return Err(SpecError::BadAxis {
            key: "grid".into(),
            reason: "grid has no points".into(),
        }
        .into());
    }

    let points: Vec<Point> = (0..total)
        .map(|mut idx| {
            let mut pt = base.clone();
            let mut coords = vec![0.0; swept.len()];
            for (k, (_, values)) in swept.iter().enumerate().rev() {
                coords[k] = values[idx % values.len()];
                idx /= values.len();
            }
            for ((name, _), v) in swept.iter().zip(coords) {
                pt.insert(name, v);
            }
            pt
        })
        .collect();

    let outcomes: Vec<Result<Vec<f64>, ModelError>> = points
        .par_iter()
        .map(|pt| evaluate(spec.target, pt))
        .collect();

    let mut rows = Vec::with_capacity(total);
    for (pt, outcome) in points.iter().zip(outcomes) {
        let metrics = outcome.map_err(|source| SweepError::Model {
            point: describe(pt, &swept),
            source,
        })?;
        let mut row: Vec<f64> = swept.iter().map(|(k, _)| pt[k]).collect();
        row.extend(metrics);
        rows.push(row);
    }

    let mut columns: Vec<String> = swept.iter().map(|(k, _)| k.to_string()).collect();
    columns.extend(spec.target.metrics().iter().map(|m| m.to_string()));

    let result = SweepResult {
        columns,
        rows,
        metadata: metadata(spec, opts),
    };
    result.check()?;
    Ok(result)
}

fn metadata(spec: &SweepSpec, opts: &RunOptions) -> Vec<(String, String)> {
    let mut m = vec![
        ("tool".to_string(), "femtoconn".to_string()),
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("target".to_string(), spec.target.name().to_string()),
        ("seed".to_string(), opts.seed.0.to_string()),
    ];
    if let Some(ts) = &opts.timestamp {
        m.push(("timestamp".to_string(), ts.clone()));
    }
    m.push((
        "units".to_string(),
        "lengths in femtocell radii; densities per unit area".to_string(),
    ));
    if let Some(note) = &spec.note {
        m.push(("note".to_string(), note.replace('\n', " ")));
    }
    for p in spec.target.params() {
        if let Some(axis) = spec.grid.get(p.name) {
            m.push((format!("grid.{}", p.name), axis.describe()));
        }
    }
    for p in spec.target.params() {
        if let Some(v) = spec.fixed.get(p.name) {
            m.push((format!("fixed.{}", p.name), format_number(*v)));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{load_spec, EXIT_FAILURE, EXIT_SPEC};

    #[test]
    fn fully_inside_column_matches_closed_form() {
        let mut spec = load_spec("fig7").unwrap();
        spec.apply_override("beta=-1").unwrap();
        spec.apply_override("n_f=100").unwrap();
        spec.apply_override("r=0.1:0.9:0.1").unwrap();
        let res = run_sweep(&spec, &RunOptions::default()).unwrap();
        assert_eq!(res.columns, ["r", "p_c", "p_d_bound"]);
        assert_eq!(res.rows.len(), 9);
        for row in &res.rows {
            let r = row[0];
            let expected = 1.0 - (1.0 - r * r).powi(99);
            assert!((row[1] - expected).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn zero_threshold_gives_zero_outage() {
        let mut spec = load_spec("fig9").unwrap();
        spec.apply_override("gamma=0").unwrap();
        let res = run_sweep(&spec, &RunOptions::default()).unwrap();
        assert!(res.column("p_outage").unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn grid_order_is_row_major_in_canonical_order() {
        let spec = load_spec("fig9").unwrap();
        let res = run_sweep(&spec, &RunOptions::default()).unwrap();
        let d_u = res.column("d_u").unwrap();
        let d_f = res.column("d_f").unwrap();
        assert_eq!(d_u[0], 5.0);
        assert!(d_f[1] > d_f[0]);
        assert_eq!(*d_u.last().unwrap(), 20.0);
        assert_eq!(res.meta("target"), Some("outage_vs_df"));
        assert_eq!(res.meta("timestamp"), None);
    }

    #[test]
    fn domain_errors_are_spec_errors() {
        let mut spec = load_spec("fig7").unwrap();
        spec.apply_override("r=0.5,1.5").unwrap();
        let e = run_sweep(&spec, &RunOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_SPEC);
        assert!(e.to_string().contains("r=1.5"), "{e}");
    }

    #[test]
    fn infeasible_target_exits_one() {
        let mut spec = load_spec("fig10").unwrap();
        spec.apply_override("target_outage=0").unwrap();
        let e = run_sweep(&spec, &RunOptions::default()).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_FAILURE);
    }

    #[test]
    fn timestamp_only_when_requested() {
        let opts = RunOptions {
            timestamp: Some("2026-10-15T00:00:00Z".into()),
            ..RunOptions::default()
        };
        let res = run_sweep(&load_spec("fig8").unwrap(), &opts).unwrap();
        assert_eq!(res.meta("timestamp"), Some("2026-10-15T00:00:00Z"));
    }
}
