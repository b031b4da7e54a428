//! Declarative scenarios and multi-route reports.
//!
//! A scenario document (TOML, `schema_version = 1`) names a state, a list of
//! observables and the routes to evaluate them by. Expected values are pinned
//! in the document itself, as numbers or small expressions in `N`:
//!
//! ```toml
//! schema_version = 1
//! name = "ensemble-A-pure"
//! n_sites = 4
//! routes = ["dense", "trace", "product-fast"]
//!
//! [state]
//! kind = "psi-delta"   # psi-delta | balanced-mixture | maximally-mixed
//! axis = "x"           # | custom-single-spin | custom-ensemble
//!
//! [[observables]]
//! axis = "z"
//! expected_mean = 0
//! expected_variance = "N/4"
//! ```
//!
//! Comparison scenarios list several `[[systems]]` instead; they are
//! reported side by side with a categorical verdict and never merged.

mod builtins;
mod expr;
mod report;
mod run;
mod spec;

use std::path::Path;

use thiserror::Error;

use crate::error::SpinError;

pub use builtins::{builtin, builtin_names, BUILTINS};
pub use expr::Value;
pub use report::{emit_report, format_number, Format, CSV_HEADER};
pub use run::{
    run_scenario, run_scenario_with, ComparisonReport, Provenance, RouteResult, RouteRow, Sampling, ScenarioReport,
    Status, SystemReport, ROUTE_AGREEMENT, SIGMA_GATE,
};
pub use spec::{
    apply_overrides, parse_scenario, validate, ComparisonSpec, MemberKind, MemberSpec, ObservableKind, ObservableSpec,
    Overrides, Route, ScenarioSpec, StateSpec, SystemSpec, DEFAULT_SEED, DEFAULT_SHOTS, DEFAULT_TOLERANCE,
    SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid scenario: {0}")]
    Semantic(String),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error("`{0}` is neither a scenario file nor a built-in scenario (see `list`)")]
    NotFound(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Resolves `name_or_path` as a scenario file if one exists, otherwise as a built-in name.
pub fn load_scenario(name_or_path: &str) -> Result<ScenarioSpec, ScenarioError> {
    let path = Path::new(name_or_path);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ScenarioError::Io { path: name_or_path.to_string(), source })?;
        return parse_scenario(&text);
    }
    let text = builtin(name_or_path).ok_or_else(|| ScenarioError::NotFound(name_or_path.to_string()))?;
    parse_scenario(text)
}
