//! Parameter sweeps behind the command-line tool: figure recipes, grid
//! evaluation, CSV and SVG output.

mod csv;
mod plot;
mod run;
mod spec;

use std::path::PathBuf;

use thiserror::Error;

use crate::error::ModelError;

pub use csv::{csv_field, emit_csv, format_number, to_csv_string};
pub use plot::{emit_plot, to_svg_string};
pub use run::{run_sweep, RunOptions, SweepResult};
pub use spec::{Axis, Param, PlotKind, SweepSpec, SweepTarget};

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status when validation fails or a target is infeasible.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for malformed specs and parameters out of domain.
pub const EXIT_SPEC: i32 = 2;
/// Exit status for file-system errors.
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot parse sweep spec: {0}")]
    Parse(String),
    #[error("unknown recipe '{0}' (expected fig5..fig10 or a path to a .toml file)")]
    UnknownRecipe(String),
    #[error("parameter '{key}' is not used by target {target}")]
    UnknownParameter { key: String, target: &'static str },
    #[error("parameter '{key}' is required by target {target}")]
    Missing { key: String, target: &'static str },
    #[error("parameter '{key}' appears in both [grid] and [fixed]")]
    Duplicate { key: String },
    #[error("grid axis '{key}': {reason}")]
    BadAxis { key: String, reason: String },
    #[error("parameter '{key}': {reason}")]
    BadValue { key: String, reason: String },
    #[error("override '{0}' is not key=value, key=a,b,c or key=start:stop:step")]
    BadOverride(String),
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("at {point}: {source}")]
    Model {
        point: String,
        #[source]
        source: ModelError,
    },
    #[error("result is empty; nothing to write")]
    EmptyResult,
    #[error("result row {row} is malformed: {reason}")]
    InvalidResult { row: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl SweepError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Model {
                source: ModelError::NoSolution { .. },
                ..
            } => EXIT_FAILURE,
            SweepError::Io { .. } => EXIT_IO,
            _ => EXIT_SPEC,
        }
    }
}

pub const RECIPES: [&str; 6] = ["fig5", "fig6", "fig7", "fig8", "fig9", "fig10"];

/// Text of a shipped figure recipe.
pub fn recipe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig5" => include_str!("../../recipes/fig5.toml"),
        "fig6" => include_str!("../../recipes/fig6.toml"),
        "fig7" => include_str!("../../recipes/fig7.toml"),
        "fig8" => include_str!("../../recipes/fig8.toml"),
        "fig9" => include_str!("../../recipes/fig9.toml"),
        "fig10" => include_str!("../../recipes/fig10.toml"),
        _ => return None,
    })
}

/// Resolves a recipe name or reads a spec file.
pub fn load_spec(name_or_path: &str) -> Result<SweepSpec, SweepError> {
    if let Some(text) = recipe(name_or_path) {
        return Ok(SweepSpec::from_toml(text)?);
    }
    let path = PathBuf::from(name_or_path);
    let looks_like_file = path.extension().is_some() || path.components().count() > 1;
    if !looks_like_file && !path.exists() {
        return Err(SpecError::UnknownRecipe(name_or_path.to_string()).into());
    }
    let text = std::fs::read_to_string(&path).map_err(|source| SweepError::Io { path, source })?;
    Ok(SweepSpec::from_toml(&text)?)
}

pub(crate) fn write_file(path: &std::path::Path, bytes: &[u8]) -> Result<(), SweepError> {
    let io = |source| SweepError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, bytes).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_recipe_parses() {
        for name in RECIPES {
            let spec = load_spec(name).unwrap();
            assert_eq!(spec.output, name);
        }
    }

    #[test]
    fn unknown_recipe_and_missing_file() {
        let e = load_spec("fig11").unwrap_err();
        assert_eq!(e.exit_code(), EXIT_SPEC);
        let e = load_spec("/nonexistent/dir/spec.toml").unwrap_err();
        assert_eq!(e.exit_code(), EXIT_IO);
    }

    #[test]
    fn spec_round_trips_through_toml() {
        for name in RECIPES {
            let spec = load_spec(name).unwrap();
            let again = SweepSpec::from_toml(&spec.to_toml()).unwrap();
            assert_eq!(spec, again);
        }
    }
}
