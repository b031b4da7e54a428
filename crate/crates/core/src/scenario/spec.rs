//! Scenario documents: TOML schema, parsing and validation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::expr::Value;
use super::ScenarioError;
use crate::algebra::{Axis, SingleSpinKet};
use crate::observables::LocalSpinTerm;
use crate::states::{SignPattern, ENUMERATION_CAP};
use crate::C64;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SHOTS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Evaluation route for an (observable, state) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Dense,
    Trace,
    ProductFast,
    MonteCarlo,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::Dense, Route::Trace, Route::ProductFast, Route::MonteCarlo];

    pub fn as_str(self) -> &'static str {
        match self {
            Route::Dense => "dense",
            Route::Trace => "trace",
            Route::ProductFast => "product-fast",
            Route::MonteCarlo => "monte-carlo",
        }
    }

    pub fn is_exact(self) -> bool {
        self != Route::MonteCarlo
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Route::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown route `{s}` (expected dense, trace, product-fast or monte-carlo)"))
    }
}

/// How the state of one system is prepared.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// Product of axis eigenkets; `None` means the first balanced ordering.
    PsiDelta {
        axis: Axis,
        pattern: Option<SignPattern>,
    },
    BalancedMixture {
        axis: Axis,
    },
    MaximallyMixed,
    CustomSingleSpin {
        ket: SingleSpinKet,
    },
    CustomEnsemble {
        members: Vec<MemberSpec>,
    },
}

impl StateSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            StateSpec::PsiDelta { .. } => "psi-delta",
            StateSpec::BalancedMixture { .. } => "balanced-mixture",
            StateSpec::MaximallyMixed => "maximally-mixed",
            StateSpec::CustomSingleSpin { .. } => "custom-single-spin",
            StateSpec::CustomEnsemble { .. } => "custom-ensemble",
        }
    }

    /// Whether every member is a product state.
    pub fn is_product(&self) -> bool {
        match self {
            StateSpec::CustomEnsemble { members } => {
                members.iter().all(|m| !matches!(m.state, MemberKind::Amplitudes(_)))
            }
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemberSpec {
    pub weight: f64,
    pub state: MemberKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MemberKind {
    Pattern { axis: Axis, pattern: SignPattern },
    Kets(Vec<SingleSpinKet>),
    Amplitudes(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObservableKind {
    /// `S_axis` summed over all sites.
    Collective(Axis),
    Site {
        site: usize,
        axis: Axis,
    },
    Terms(Vec<LocalSpinTerm>),
    Matrix(Vec<Vec<C64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSpec {
    pub label: String,
    pub kind: ObservableKind,
    pub expected_mean: Option<Value>,
    pub expected_variance: Option<Value>,
    pub tolerance: f64,
    /// Free-text note on where the pinned values come from.
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub label: String,
    pub n_sites: usize,
    pub state: StateSpec,
    pub observables: Vec<ObservableSpec>,
    pub routes: Vec<Route>,
    pub shots: usize,
    pub seed: u64,
}

/// A validated scenario: one system, or several juxtaposed for comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub description: Option<String>,
    pub systems: Vec<SystemSpec>,
    /// `Some` for comparison scenarios; holds the pinned verdict, if any.
    pub comparison: Option<ComparisonSpec>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonSpec {
    pub expected_verdict: Option<String>,
}

/// Command-line overrides applied on top of a parsed scenario.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n_sites: Option<usize>,
    pub axis: Option<Axis>,
    pub routes: Option<Vec<Route>>,
    pub shots: Option<usize>,
    pub seed: Option<u64>,
}

// ---- raw document ----------------------------------------------------------

type RawComplex = [Value; 2];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema_version: u32,
    name: String,
    description: Option<String>,
    expected_verdict: Option<String>,
    #[serde(default)]
    systems: Vec<RawSystem>,
    label: Option<String>,
    n_sites: Option<usize>,
    state: Option<RawState>,
    observables: Option<Vec<RawObservable>>,
    routes: Option<Vec<Route>>,
    shots: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    label: Option<String>,
    n_sites: usize,
    state: RawState,
    observables: Vec<RawObservable>,
    routes: Option<Vec<Route>>,
    shots: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    kind: String,
    axis: Option<Axis>,
    pattern: Option<SignPattern>,
    amplitudes: Option<Vec<RawComplex>>,
    members: Option<Vec<RawMember>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMember {
    weight: Value,
    axis: Option<Axis>,
    pattern: Option<SignPattern>,
    kets: Option<Vec<[RawComplex; 2]>>,
    amplitudes: Option<Vec<RawComplex>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawObservable {
    label: Option<String>,
    axis: Option<Axis>,
    site: Option<usize>,
    terms: Option<Vec<RawTerm>>,
    matrix: Option<Vec<Vec<RawComplex>>>,
    expected_mean: Option<Value>,
    expected_variance: Option<Value>,
    tolerance: Option<f64>,
    source: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    site: usize,
    axis: Axis,
    coefficient: Option<Value>,
}

fn semantic(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Semantic(msg.into())
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map(|s| line_column(text, s.start)).unwrap_or((1, 1));
        ScenarioError::Syntax { line, column, message: e.message().to_string() }
    })?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(semantic(format!(
            "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
            raw.schema_version
        )));
    }
    if raw.name.trim().is_empty() {
        return Err(semantic("scenario name must not be empty"));
    }
    let single = raw.state.is_some() || raw.n_sites.is_some() || raw.observables.is_some();
    let systems = match (single, raw.systems.is_empty()) {
        (true, false) => return Err(semantic("use either top-level state fields or [[systems]], not both")),
        (false, true) => return Err(semantic("scenario defines no state (add [state] or [[systems]])")),
        (true, true) => {
            let n_sites = raw.n_sites.ok_or_else(|| semantic("missing `n_sites`"))?;
            let state = raw.state.ok_or_else(|| semantic("missing [state] table"))?;
            let observables = raw.observables.ok_or_else(|| semantic("missing [[observables]]"))?;
            let system = RawSystem {
                label: raw.label.or_else(|| Some(raw.name.clone())),
                n_sites,
                state,
                observables,
                routes: raw.routes,
                shots: raw.shots,
                seed: raw.seed,
            };
            vec![convert_system(system, 0)?]
        }
        (false, false) => {
            if raw.label.is_some() || raw.routes.is_some() || raw.shots.is_some() || raw.seed.is_some() {
                return Err(semantic("label/routes/shots/seed belong inside each [[systems]] entry"));
            }
            raw.systems.into_iter().enumerate().map(|(i, s)| convert_system(s, i)).collect::<Result<_, _>>()?
        }
    };
    let comparison = if systems.len() > 1 {
        Some(ComparisonSpec { expected_verdict: raw.expected_verdict })
    } else if raw.expected_verdict.is_some() {
        return Err(semantic("expected_verdict needs at least two systems"));
    } else {
        None
    };
    let spec = ScenarioSpec { name: raw.name, description: raw.description, systems, comparison };
    validate(&spec)?;
    Ok(spec)
}

fn complex(raw: &RawComplex, n: usize) -> Result<C64, ScenarioError> {
    let re = raw[0].eval(n).map_err(semantic)?;
    let im = raw[1].eval(n).map_err(semantic)?;
    Ok(C64::new(re, im))
}

fn ket(raw: &[RawComplex; 2], n: usize) -> Result<SingleSpinKet, ScenarioError> {
    SingleSpinKet::new(complex(&raw[0], n)?, complex(&raw[1], n)?).map_err(|e| semantic(format!("ket: {e}")))
}

fn convert_system(raw: RawSystem, index: usize) -> Result<SystemSpec, ScenarioError> {
    let n = raw.n_sites;
    let state = convert_state(raw.state, n)?;
    let observables = raw.observables.into_iter().map(|o| convert_observable(o, n)).collect::<Result<Vec<_>, _>>()?;
    let routes = raw.routes.unwrap_or_else(|| vec![Route::Dense, Route::Trace, Route::ProductFast]);
    Ok(SystemSpec {
        label: raw.label.unwrap_or_else(|| format!("system-{}", index + 1)),
        n_sites: n,
        state,
        observables,
        routes,
        shots: raw.shots.unwrap_or(DEFAULT_SHOTS),
        seed: raw.seed.unwrap_or(DEFAULT_SEED),
    })
}

fn convert_state(raw: RawState, n: usize) -> Result<StateSpec, ScenarioError> {
    let kind = raw.kind.as_str();
    let reject = |present: bool, field: &str| {
        if present {
            Err(semantic(format!("field `{field}` is not allowed for state kind `{kind}`")))
        } else {
            Ok(())
        }
    };
    let need_axis = || raw.axis.ok_or_else(|| semantic(format!("state kind `{kind}` needs `axis`")));
    match kind {
        "psi-delta" => {
            reject(raw.amplitudes.is_some(), "amplitudes")?;
            reject(raw.members.is_some(), "members")?;
            Ok(StateSpec::PsiDelta { axis: need_axis()?, pattern: raw.pattern })
        }
        "balanced-mixture" => {
            reject(raw.pattern.is_some(), "pattern")?;
            reject(raw.amplitudes.is_some(), "amplitudes")?;
            reject(raw.members.is_some(), "members")?;
            Ok(StateSpec::BalancedMixture { axis: need_axis()? })
        }
        "maximally-mixed" => {
            reject(raw.axis.is_some(), "axis")?;
            reject(raw.pattern.is_some(), "pattern")?;
            reject(raw.amplitudes.is_some(), "amplitudes")?;
            reject(raw.members.is_some(), "members")?;
            Ok(StateSpec::MaximallyMixed)
        }
        "custom-single-spin" => {
            reject(raw.axis.is_some(), "axis")?;
            reject(raw.pattern.is_some(), "pattern")?;
            reject(raw.members.is_some(), "members")?;
            let amps = raw.amplitudes.ok_or_else(|| semantic("custom-single-spin needs `amplitudes`"))?;
            let pair: &[RawComplex; 2] =
                amps.as_slice().try_into().map_err(|_| semantic("custom-single-spin needs exactly two amplitudes"))?;
            Ok(StateSpec::CustomSingleSpin { ket: ket(pair, n)? })
        }
        "custom-ensemble" => {
            reject(raw.axis.is_some(), "axis")?;
            reject(raw.pattern.is_some(), "pattern")?;
            reject(raw.amplitudes.is_some(), "amplitudes")?;
            let members = raw.members.ok_or_else(|| semantic("custom-ensemble needs `members`"))?;
            let members = members
                .into_iter()
                .map(|m| convert_member(m, n))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(StateSpec::CustomEnsemble { members })
        }
        other => Err(semantic(format!(
            "unknown state kind `{other}` (expected psi-delta, balanced-mixture, maximally-mixed, custom-single-spin or custom-ensemble)"
        ))),
    }
}

fn convert_member(raw: RawMember, n: usize) -> Result<MemberSpec, ScenarioError> {
    let weight = raw.weight.eval(n).map_err(semantic)?;
    let state = match (raw.pattern, raw.kets, raw.amplitudes) {
        (Some(pattern), None, None) => {
            let axis = raw.axis.ok_or_else(|| semantic("member with `pattern` needs `axis`"))?;
            MemberKind::Pattern { axis, pattern }
        }
        (None, Some(kets), None) if raw.axis.is_none() => {
            MemberKind::Kets(kets.iter().map(|k| ket(k, n)).collect::<Result<_, _>>()?)
        }
        (None, None, Some(amps)) if raw.axis.is_none() => {
            MemberKind::Amplitudes(amps.iter().map(|a| complex(a, n)).collect::<Result<_, _>>()?)
        }
        _ => return Err(semantic("each member needs exactly one of `pattern` (with `axis`), `kets` or `amplitudes`")),
    };
    Ok(MemberSpec { weight, state })
}

fn convert_observable(raw: RawObservable, n: usize) -> Result<ObservableSpec, ScenarioError> {
    let site_prefix = if n == 1 { 's' } else { 'S' };
    let (kind, default_label) = match (raw.axis, raw.site, raw.terms, raw.matrix) {
        (Some(axis), None, None, None) => (ObservableKind::Collective(axis), format!("{site_prefix}_{axis}")),
        (Some(axis), Some(site), None, None) => (ObservableKind::Site { site, axis }, format!("s_{axis}{site}")),
        (None, None, Some(terms), None) => {
            let terms = terms
                .into_iter()
                .map(|t| {
                    let coefficient = t.coefficient.map_or(Ok(1.0), |c| c.eval(n)).map_err(semantic)?;
                    Ok(LocalSpinTerm { site: t.site, axis: t.axis, coefficient })
                })
                .collect::<Result<Vec<_>, ScenarioError>>()?;
            (ObservableKind::Terms(terms), "terms".to_string())
        }
        (None, None, None, Some(rows)) => {
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|z| complex(z, n)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            (ObservableKind::Matrix(rows), "matrix".to_string())
        }
        _ => {
            return Err(semantic(
                "each observable needs exactly one of `axis` (optionally with `site`), `terms` or `matrix`",
            ))
        }
    };
    let tolerance = raw.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(semantic(format!("tolerance must be a non-negative number, got {tolerance}")));
    }
    Ok(ObservableSpec {
        label: raw.label.unwrap_or(default_label),
        kind,
        expected_mean: raw.expected_mean,
        expected_variance: raw.expected_variance,
        tolerance,
        source: raw.source,
    })
}

/// Checks parameter consistency; run again after [`apply_overrides`].
pub fn validate(spec: &ScenarioSpec) -> Result<(), ScenarioError> {
    let mut labels = BTreeSet::new();
    for system in &spec.systems {
        if !labels.insert(system.label.as_str()) {
            return Err(semantic(format!("duplicate system label `{}`", system.label)));
        }
        validate_system(system).map_err(|e| match e {
            ScenarioError::Semantic(m) if spec.systems.len() > 1 => semantic(format!("system `{}`: {m}", system.label)),
            other => other,
        })?;
    }
    Ok(())
}

fn validate_system(s: &SystemSpec) -> Result<(), ScenarioError> {
    let n = s.n_sites;
    if n == 0 {
        return Err(semantic("n_sites must be at least 1"));
    }
    match &s.state {
        StateSpec::PsiDelta { pattern: Some(p), .. } if p.len() != n => {
            return Err(semantic(format!("pattern `{p}` has {} signs but n_sites = {n}", p.len())));
        }
        StateSpec::PsiDelta { pattern: None, .. } if !n.is_multiple_of(2) => {
            return Err(semantic(format!(
                "psi-delta without an explicit pattern uses a balanced ordering, which needs an even n_sites (got {n})"
            )));
        }
        StateSpec::BalancedMixture { .. } if n < 2 || !n.is_multiple_of(2) => {
            return Err(semantic(format!("balanced-mixture needs an even n_sites >= 2 (got {n})")));
        }
        StateSpec::BalancedMixture { .. } if n > ENUMERATION_CAP => {
            return Err(semantic(format!(
                "balanced-mixture enumerates orderings only up to n_sites = {ENUMERATION_CAP} (got {n})"
            )));
        }
        StateSpec::CustomSingleSpin { .. } if n != 1 => {
            return Err(semantic(format!("custom-single-spin needs n_sites = 1 (got {n})")));
        }
        StateSpec::CustomEnsemble { members } => {
            if members.is_empty() {
                return Err(semantic("custom-ensemble needs at least one member"));
            }
            for m in members {
                let len = match &m.state {
                    MemberKind::Pattern { pattern, .. } => pattern.len(),
                    MemberKind::Kets(k) => k.len(),
                    MemberKind::Amplitudes(a) if a.len().is_power_of_two() => a.len().trailing_zeros() as usize,
                    MemberKind::Amplitudes(a) => {
                        return Err(semantic(format!("member amplitude count {} is not a power of two", a.len())));
                    }
                };
                if len != n {
                    return Err(semantic(format!("member spans {len} sites but n_sites = {n}")));
                }
            }
        }
        _ => {}
    }
    if s.observables.is_empty() {
        return Err(semantic("at least one observable is required"));
    }
    let mut labels = BTreeSet::new();
    for o in &s.observables {
        if !labels.insert(o.label.as_str()) {
            return Err(semantic(format!("duplicate observable label `{}`", o.label)));
        }
        match &o.kind {
            ObservableKind::Site { site, .. } if *site == 0 || *site > n => {
                return Err(semantic(format!("observable `{}`: site {site} outside 1..={n}", o.label)));
            }
            ObservableKind::Terms(terms) => {
                if let Some(t) = terms.iter().find(|t| t.site == 0 || t.site > n) {
                    return Err(semantic(format!("observable `{}`: site {} outside 1..={n}", o.label, t.site)));
                }
            }
            ObservableKind::Matrix(rows) => {
                let dim = 1usize.checked_shl(n as u32).unwrap_or(0);
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(semantic(format!("observable `{}`: matrix must be {dim}x{dim}", o.label)));
                }
            }
            _ => {}
        }
    }
    if s.routes.is_empty() {
        return Err(semantic("at least one route is required"));
    }
    let unique: BTreeSet<_> = s.routes.iter().collect();
    if unique.len() != s.routes.len() {
        return Err(semantic("routes must not repeat"));
    }
    let needs_product = s.routes.iter().any(|r| matches!(r, Route::ProductFast | Route::MonteCarlo));
    if needs_product && !s.state.is_product() {
        return Err(semantic(
            "product-fast and monte-carlo need a product state or a mixture of product states (a member gives raw amplitudes)",
        ));
    }
    if s.routes.contains(&Route::MonteCarlo) && s.shots == 0 {
        return Err(semantic("monte-carlo needs shots >= 1"));
    }
    Ok(())
}

/// Applies command-line overrides to every system and revalidates.
pub fn apply_overrides(spec: &mut ScenarioSpec, o: &Overrides) -> Result<(), ScenarioError> {
    for s in &mut spec.systems {
        if let Some(n) = o.n_sites {
            if n != s.n_sites {
                match &s.state {
                    StateSpec::PsiDelta { pattern: Some(_), .. } => {
                        return Err(semantic("--n cannot resize a psi-delta state with an explicit pattern"));
                    }
                    StateSpec::CustomSingleSpin { .. } | StateSpec::CustomEnsemble { .. } => {
                        return Err(semantic(format!("--n cannot resize a {} state", s.state.kind())));
                    }
                    _ => {}
                }
                if s.observables.iter().any(|ob| !matches!(ob.kind, ObservableKind::Collective(_))) {
                    return Err(semantic("--n only applies when every observable is a collective S_axis"));
                }
                s.n_sites = n;
            }
        }
        if let Some(axis) = o.axis {
            match &mut s.state {
                StateSpec::PsiDelta { axis: a, .. } | StateSpec::BalancedMixture { axis: a } => *a = axis,
                other => return Err(semantic(format!("--axis does not apply to a {} state", other.kind()))),
            }
        }
        if let Some(routes) = &o.routes {
            s.routes = routes.clone();
        }
        if let Some(shots) = o.shots {
            s.shots = shots;
        }
        if let Some(seed) = o.seed {
            s.seed = seed;
        }
    }
    validate(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1
name = "demo"
n_sites = 4
routes = ["dense", "product-fast"]

[state]
kind = "psi-delta"
axis = "x"

[[observables]]
axis = "z"
expected_variance = "N/4"
"#;

    #[test]
    fn parses_minimal_document() {
        let spec = parse_scenario(MINIMAL).unwrap();
        assert_eq!(spec.name, "demo");
        assert!(spec.comparison.is_none());
        let s = &spec.systems[0];
        assert_eq!(s.label, "demo");
        assert_eq!(s.state, StateSpec::PsiDelta { axis: Axis::X, pattern: None });
        assert_eq!(s.observables[0].label, "S_z");
        assert_eq!(s.observables[0].expected_variance, Some(Value::Expr("N/4".into())));
        assert_eq!(s.routes, [Route::Dense, Route::ProductFast]);
        assert_eq!((s.shots, s.seed), (DEFAULT_SHOTS, DEFAULT_SEED));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_scenario("schema_version = 1\nname = \"x\"\nn_sites = = 4\n").unwrap_err();
        match err {
            ScenarioError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = MINIMAL.replace("routes =", "colour = \"red\"\nroutes =");
        assert!(matches!(parse_scenario(&text), Err(ScenarioError::Syntax { .. })));
        let text = MINIMAL.replace("axis = \"x\"", "axis = \"x\"\nflavour = 1");
        assert!(matches!(parse_scenario(&text), Err(ScenarioError::Syntax { .. })));
    }

    #[test]
    fn odd_balanced_mixture_is_semantic_error() {
        let text = MINIMAL.replace("n_sites = 4", "n_sites = 3").replace("psi-delta", "balanced-mixture");
        assert!(matches!(parse_scenario(&text), Err(ScenarioError::Semantic(_))));
        let text = MINIMAL.replace("n_sites = 4", "n_sites = 3");
        assert!(matches!(parse_scenario(&text), Err(ScenarioError::Semantic(_))));
    }

    #[test]
    fn semantic_checks() {
        let bad_version = MINIMAL.replace("schema_version = 1", "schema_version = 2");
        assert!(matches!(parse_scenario(&bad_version), Err(ScenarioError::Semantic(_))));
        let bad_pattern = MINIMAL.replace("axis = \"x\"\n", "axis = \"x\"\npattern = \"+-\"\n");
        assert!(matches!(parse_scenario(&bad_pattern), Err(ScenarioError::Semantic(_))));
        let bad_route = MINIMAL.replace("\"product-fast\"]", "\"dense\"]");
        assert!(matches!(parse_scenario(&bad_route), Err(ScenarioError::Semantic(_))));
        let bad_site = MINIMAL.replace("axis = \"z\"", "axis = \"z\"\nsite = 5");
        assert!(matches!(parse_scenario(&bad_site), Err(ScenarioError::Semantic(_))));
    }

    #[test]
    fn raw_amplitude_members_exclude_product_routes() {
        let text = r#"
schema_version = 1
name = "bell"
n_sites = 2
routes = ["dense", "product-fast"]
[state]
kind = "custom-ensemble"
members = [{ weight = 1, amplitudes = [["sqrt(1/2)", 0], [0, 0], [0, 0], ["sqrt(1/2)", 0]] }]
[[observables]]
axis = "z"
"#;
        assert!(matches!(parse_scenario(text), Err(ScenarioError::Semantic(_))));
        assert!(parse_scenario(&text.replace("\"product-fast\"", "\"trace\"")).is_ok());
    }

    #[test]
    fn overrides_resize_and_revalidate() {
        let mut spec = parse_scenario(MINIMAL).unwrap();
        let o = Overrides { n_sites: Some(8), axis: Some(Axis::Z), seed: Some(9), ..Default::default() };
        apply_overrides(&mut spec, &o).unwrap();
        assert_eq!(spec.systems[0].n_sites, 8);
        assert_eq!(spec.systems[0].state, StateSpec::PsiDelta { axis: Axis::Z, pattern: None });
        assert_eq!(spec.systems[0].seed, 9);
        let odd = Overrides { n_sites: Some(5), ..Default::default() };
        assert!(apply_overrides(&mut spec, &odd).is_err());
    }

    #[test]
    fn route_parsing() {
        assert_eq!("monte-carlo".parse::<Route>(), Ok(Route::MonteCarlo));
        assert!("fast".parse::<Route>().is_err());
    }
}
