//! Sweep recipes: which figure to regenerate and over which grid.
//!
//! Recipes are TOML files with three sections:
//!
//! ```toml
//! [sweep]
//! target = "outage_vs_df"
//! output = "fig9"
//!
//! [grid]
//! d_u = [5, 10, 20]
//! d_f = { start = 0.1, stop = 10.0, step = 0.1 }
//!
//! [fixed]
//! eta = 2.0
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SpecError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepTarget {
    /// Connectivity probability over mobility factor and range.
    ConnectivityVsRBeta,
    /// Serving ratio over user density.
    PcVsDu,
    /// Outage probability over FAP density.
    OutageVsDf,
    /// Achievable spectral efficiency over user density.
    EtaVsDu,
}

/// A parameter a target accepts, in canonical column order.
#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub name: &'static str,
    pub required: bool,
}

const fn req(name: &'static str) -> Param {
    Param {
        name,
        required: true,
    }
}

const fn opt(name: &'static str) -> Param {
    Param {
        name,
        required: false,
    }
}

const CONNECTIVITY_PARAMS: [Param; 3] = [req("n_f"), req("beta"), req("r")];
const PC_PARAMS: [Param; 6] = [
    req("d_f"),
    req("p_t"),
    req("p_min"),
    req("alpha"),
    opt("r"),
    req("d_u"),
];
const OUTAGE_PARAMS: [Param; 9] = [
    req("d_u"),
    req("eta"),
    opt("gamma"),
    req("p_t"),
    req("p_min"),
    req("alpha"),
    opt("r"),
    opt("d_f_active"),
    req("d_f"),
];
const ETA_PARAMS: [Param; 7] = [
    req("target_outage"),
    req("d_f"),
    req("p_t"),
    req("p_min"),
    req("alpha"),
    opt("r"),
    req("d_u"),
];

impl SweepTarget {
    pub fn name(self) -> &'static str {
        match self {
            SweepTarget::ConnectivityVsRBeta => "connectivity_vs_r_beta",
            SweepTarget::PcVsDu => "pc_vs_du",
            SweepTarget::OutageVsDf => "outage_vs_df",
            SweepTarget::EtaVsDu => "eta_vs_du",
        }
    }

    /// Accepted parameters. The figure's abscissa comes last.
    pub fn params(self) -> &'static [Param] {
        match self {
            SweepTarget::ConnectivityVsRBeta => &CONNECTIVITY_PARAMS,
            SweepTarget::PcVsDu => &PC_PARAMS,
            SweepTarget::OutageVsDf => &OUTAGE_PARAMS,
            SweepTarget::EtaVsDu => &ETA_PARAMS,
        }
    }

    pub fn metrics(self) -> &'static [&'static str] {
        match self {
            SweepTarget::ConnectivityVsRBeta => &["p_c", "p_d_bound"],
            SweepTarget::PcVsDu => &["range", "p_c", "d_f_active"],
            SweepTarget::OutageVsDf => &["range", "gamma_eff", "d_f_active", "p_outage"],
            SweepTarget::EtaVsDu => &["range", "eta", "gamma"],
        }
    }

    /// The metric drawn in plots.
    pub fn primary_metric(self) -> &'static str {
        match self {
            SweepTarget::ConnectivityVsRBeta => "p_c",
            SweepTarget::PcVsDu => "p_c",
            SweepTarget::OutageVsDf => "p_outage",
            SweepTarget::EtaVsDu => "eta",
        }
    }

    fn accepts(self, key: &str) -> bool {
        self.params().iter().any(|p| p.name == key)
    }
}

/// One swept parameter: an explicit list or an inclusive arithmetic range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

/// Grid values are snapped to this many decimals so `0.1 + 2 * 0.1` prints
/// as `0.3`.
const GRID_DECIMALS: i32 = 12;

impl Axis {
    pub fn validate(&self, key: &str) -> Result<(), SpecError> {
        let bad = |reason: &str| SpecError::BadAxis {
            key: key.to_string(),
            reason: reason.to_string(),
        };
        match self {
            Axis::Values(v) if v.is_empty() => Err(bad("empty value list")),
            Axis::Values(v) if v.iter().any(|x| !x.is_finite()) => Err(bad("non-finite value")),
            Axis::Values(_) => Ok(()),
            Axis::Range { start, stop, step } => {
                if ![start, stop, step].iter().all(|x| x.is_finite()) {
                    Err(bad("non-finite bound"))
                } else if *step <= 0.0 {
                    Err(bad("step must be > 0"))
                } else if start > stop {
                    Err(bad("start must be <= stop"))
                } else if (stop - start) / step > 1e7 {
                    Err(bad("more than 10^7 points"))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Values(v) => v.clone(),
            Axis::Range { start, stop, step } => {
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                let scale = 10f64.powi(GRID_DECIMALS);
                (0..=n)
                    .map(|i| ((start + i as f64 * step) * scale).round() / scale)
                    .collect()
            }
        }
    }

    pub fn describe(&self) -> String {
        let f = super::format_number;
        match self {
            Axis::Values(v) => v.iter().map(|x| f(*x)).collect::<Vec<_>>().join(" "),
            Axis::Range { start, stop, step } => {
                format!("{}:{}:{}", f(*start), f(*stop), f(*step))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    #[default]
    Auto,
    Lines,
    Heatmap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub target: SweepTarget,
    pub grid: BTreeMap<String, Axis>,
    pub fixed: BTreeMap<String, f64>,
    pub output: String,
    pub plot: PlotKind,
    pub note: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    target: SweepTarget,
    output: String,
    #[serde(default)]
    plot: PlotKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    sweep: Header,
    #[serde(default)]
    fixed: BTreeMap<String, f64>,
    #[serde(default)]
    grid: BTreeMap<String, Axis>,
}

impl SweepSpec {
    /// Parses and validates a recipe.
    pub fn from_toml(text: &str) -> Result<Self, SpecError> {
        let file: SpecFile = toml::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
        let spec = SweepSpec {
            target: file.sweep.target,
            grid: file.grid,
            fixed: file.fixed,
            output: file.sweep.output,
            plot: file.sweep.plot,
            note: file.sweep.note,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        let file = SpecFile {
            sweep: Header {
                target: self.target,
                output: self.output.clone(),
                plot: self.plot,
                note: self.note.clone(),
            },
            fixed: self.fixed.clone(),
            grid: self.grid.clone(),
        };
        toml::to_string(&file).expect("sweep spec serializes")
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.output.trim().is_empty() {
            return Err(SpecError::BadValue {
                key: "output".into(),
                reason: "empty output prefix".into(),
            });
        }
        for key in self.grid.keys().chain(self.fixed.keys()) {
            if !self.target.accepts(key) {
                return Err(SpecError::UnknownParameter {
                    key: key.clone(),
                    target: self.target.name(),
                });
            }
            if self.grid.contains_key(key) && self.fixed.contains_key(key) {
                return Err(SpecError::Duplicate { key: key.clone() });
            }
        }
        for p in self.target.params() {
            if p.required && !self.grid.contains_key(p.name) && !self.fixed.contains_key(p.name) {
                return Err(SpecError::Missing {
                    key: p.name.to_string(),
                    target: self.target.name(),
                });
            }
        }
        if self.grid.is_empty() {
            return Err(SpecError::BadAxis {
                key: "grid".into(),
                reason: "at least one swept parameter is required".into(),
            });
        }
        for (key, axis) in &self.grid {
            axis.validate(key)?;
        }
        for (key, value) in &self.fixed {
            if !value.is_finite() {
                return Err(SpecError::BadValue {
                    key: key.clone(),
                    reason: "non-finite value".into(),
                });
            }
        }
        if let Some(values) = self.lookup_all("n_f") {
            if values
                .iter()
                .any(|v| v.fract() != 0.0 || *v < 1.0 || *v > u32::MAX as f64)
            {
                return Err(SpecError::BadValue {
                    key: "n_f".into(),
                    reason: "must be a positive integer".into(),
                });
            }
        }
        Ok(())
    }

    fn lookup_all(&self, key: &str) -> Option<Vec<f64>> {
        if let Some(v) = self.fixed.get(key) {
            Some(vec![*v])
        } else {
            self.grid.get(key).map(Axis::values)
        }
    }

    /// Swept parameters in canonical column order.
    pub fn swept(&self) -> Vec<(&'static str, Vec<f64>)> {
        self.target
            .params()
            .iter()
            .filter_map(|p| self.grid.get(p.name).map(|a| (p.name, a.values())))
            .collect()
    }

    /// Applies a `key=value` override. `a:b:c` sets a range, `a,b,c` a list,
    /// a single number a fixed value. The key moves between `grid` and
    /// `fixed` as needed.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), SpecError> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| SpecError::BadOverride(assignment.to_string()))?;
        let key = key.trim();
        let raw = raw.trim();
        let num = |s: &str| -> Result<f64, SpecError> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| SpecError::BadOverride(assignment.to_string()))
        };
        self.grid.remove(key);
        self.fixed.remove(key);
        if raw.contains(':') {
            let parts: Vec<&str> = raw.split(':').collect();
            if parts.len() != 3 {
                return Err(SpecError::BadOverride(assignment.to_string()));
            }
            self.grid.insert(
                key.to_string(),
                Axis::Range {
                    start: num(parts[0])?,
                    stop: num(parts[1])?,
                    step: num(parts[2])?,
                },
            );
        } else if raw.contains(',') {
            let values = raw
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(num)
                .collect::<Result<Vec<_>, _>>()?;
            self.grid.insert(key.to_string(), Axis::Values(values));
        } else {
            self.fixed.insert(key.to_string(), num(raw)?);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG9: &str = include_str!("../../recipes/fig9.toml");

    #[test]
    fn parses_shipped_recipe() {
        let spec = SweepSpec::from_toml(FIG9).unwrap();
        assert_eq!(spec.target, SweepTarget::OutageVsDf);
        assert_eq!(spec.fixed["eta"], 2.0);
        let swept = spec.swept();
        assert_eq!(swept[0].0, "d_u");
        assert_eq!(swept.last().unwrap().0, "d_f");
    }

    #[test]
    fn range_values_are_inclusive_and_snapped() {
        let axis = Axis::Range {
            start: 0.1,
            stop: 0.5,
            step: 0.1,
        };
        assert_eq!(axis.values(), vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        let single = Axis::Range {
            start: 2.0,
            stop: 2.0,
            step: 1.0,
        };
        assert_eq!(single.values(), vec![2.0]);
    }

    #[test]
    fn empty_axis_rejected() {
        let mut spec = SweepSpec::from_toml(FIG9).unwrap();
        spec.grid.insert("d_u".into(), Axis::Values(vec![]));
        assert!(matches!(spec.validate(), Err(SpecError::BadAxis { key, .. }) if key == "d_u"));
    }

    #[test]
    fn bad_ranges_rejected() {
        for (start, stop, step) in [(1.0, 0.0, 0.1), (0.0, 1.0, 0.0), (0.0, 1.0, -1.0)] {
            assert!(Axis::Range { start, stop, step }.validate("x").is_err());
        }
    }

    #[test]
    fn missing_unknown_and_duplicate_keys() {
        let mut spec = SweepSpec::from_toml(FIG9).unwrap();
        spec.fixed.remove("alpha");
        assert!(matches!(spec.validate(), Err(SpecError::Missing { key, .. }) if key == "alpha"));

        let mut spec = SweepSpec::from_toml(FIG9).unwrap();
        spec.fixed.insert("beta".into(), 0.0);
        assert!(
            matches!(spec.validate(), Err(SpecError::UnknownParameter { key, .. }) if key == "beta")
        );

        let mut spec = SweepSpec::from_toml(FIG9).unwrap();
        spec.fixed.insert("d_f".into(), 1.0);
        assert!(matches!(spec.validate(), Err(SpecError::Duplicate { key }) if key == "d_f"));
    }

    #[test]
    fn overrides_move_keys() {
        let mut spec = SweepSpec::from_toml(FIG9).unwrap();
        spec.apply_override("d_u=7").unwrap();
        assert_eq!(spec.fixed["d_u"], 7.0);
        assert!(!spec.grid.contains_key("d_u"));
        spec.apply_override("eta=0:3:0.5").unwrap();
        assert!(matches!(spec.grid["eta"], Axis::Range { .. }));
        spec.apply_override("d_f=1,2,5").unwrap();
        assert_eq!(spec.grid["d_f"], Axis::Values(vec![1.0, 2.0, 5.0]));
        spec.validate().unwrap();
        assert!(spec.apply_override("d_f").is_err());
        assert!(spec.apply_override("d_f=x").is_err());
    }

    #[test]
    fn non_integer_femtocell_count_rejected() {
        let text = r#"
            [sweep]
            target = "connectivity_vs_r_beta"
            output = "x"
            [grid]
            r = [0.5]
            [fixed]
            beta = 0.0
            n_f = 2.5
        "#;
        assert!(matches!(
            SweepSpec::from_toml(text),
            Err(SpecError::BadValue { .. })
        ));
    }

    #[test]
    fn unknown_target_is_parse_error() {
        let text = "[sweep]\ntarget = \"fig11\"\noutput = \"x\"\n";
        assert!(matches!(
            SweepSpec::from_toml(text),
            Err(SpecError::Parse(_))
        ));
    }
}
