//! Scenario execution: build states, evaluate every (observable, route) pair,
//! cross-check the routes and assemble a [`ScenarioReport`].

use serde::{Deserialize, Serialize};

use super::spec::{MemberKind, ObservableKind, ObservableSpec, Route, ScenarioSpec, StateSpec, SystemSpec};
use super::ScenarioError;
use crate::algebra::DenseOperator;
use crate::observables::{
    collective, moments_ensemble, moments_product_fast, moments_product_fast_ensemble, moments_trace,
    CollectiveObservable, LocalSpinTerm, MomentReport, Observable,
};
use crate::sampler::{empirical_stats, sample_shots, SampleStats, RNG_ALGORITHM};
use crate::states::{
    balanced_mixture, density_from_ensemble, maximally_mixed, maximally_mixed_ensemble, psi_delta, DensityOperator,
    Ensemble, ProductState, PureState, SignPattern,
};
use crate::{DEFAULT_DENSE_CAP, TOLERANCE};

/// Largest spread tolerated between exact routes.
pub const ROUTE_AGREEMENT: f64 = 1e-10;

/// Width of the Monte Carlo acceptance band, in standard errors.
pub const SIGMA_GATE: f64 = 5.0;

pub const TOOL_NAME: &str = "spinmix";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteResult {
    Exact(MomentReport),
    Sampled(SampleStats),
    Skipped { reason: String },
}

impl RouteResult {
    pub fn mean(&self) -> Option<f64> {
        match self {
            RouteResult::Exact(m) => Some(m.mean),
            RouteResult::Sampled(s) => Some(s.empirical_mean),
            RouteResult::Skipped { .. } => None,
        }
    }

    pub fn variance(&self) -> Option<f64> {
        match self {
            RouteResult::Exact(m) => Some(m.variance),
            RouteResult::Sampled(s) => Some(s.empirical_variance),
            RouteResult::Skipped { .. } => None,
        }
    }

    pub fn stderr(&self) -> Option<f64> {
        match self {
            RouteResult::Sampled(s) => Some(s.stderr_mean),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteRow {
    pub observable: String,
    pub route: Route,
    pub result: RouteResult,
    pub expected_mean: Option<f64>,
    pub expected_variance: Option<f64>,
    /// `None` when nothing is pinned.
    pub expectation_met: Option<bool>,
    /// Agreement with the other exact routes, or with the exact reference for Monte Carlo.
    pub agrees: Option<bool>,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub shots: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    pub label: String,
    pub n_sites: usize,
    pub state_kind: String,
    pub pure: bool,
    /// Human-readable system/state tag, e.g. `4 spins, pure`.
    pub system: String,
    pub sampling: Option<Sampling>,
    pub rows: Vec<RouteRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub verdict: String,
    pub different_system: bool,
    pub different_state: bool,
    pub systems: Vec<String>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub rng: String,
}

impl Default for Provenance {
    fn default() -> Self {
        Provenance { tool: TOOL_NAME.into(), version: env!("CARGO_PKG_VERSION").into(), rng: RNG_ALGORITHM.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub description: Option<String>,
    pub strict: bool,
    pub systems: Vec<SystemReport>,
    pub comparison: Option<ComparisonReport>,
    pub provenance: Provenance,
    pub passed: bool,
    pub failures: Vec<String>,
    /// Statistical disagreements that only fail the run under `strict`.
    pub warnings: Vec<String>,
}

/// Runs a scenario; Monte Carlo disagreements are warnings.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<ScenarioReport, ScenarioError> {
    run_scenario_with(spec, false)
}

/// Runs a scenario; with `strict`, Monte Carlo disagreements fail the run too.
pub fn run_scenario_with(spec: &ScenarioSpec, strict: bool) -> Result<ScenarioReport, ScenarioError> {
    super::spec::validate(spec)?;
    let mut failures = Vec::new();
    let mut warnings = Vec::new();
    let mut systems = Vec::with_capacity(spec.systems.len());
    for system in &spec.systems {
        let report = run_system(system)?;
        for row in report.rows.iter().filter(|r| r.status == Status::Fail) {
            let prefix = format!("{}: {} via {}", report.label, row.observable, row.route);
            let mut problems = Vec::new();
            if row.expectation_met == Some(false) {
                problems.push("pinned value not reproduced");
            }
            if row.agrees == Some(false) {
                problems.push("routes disagree");
            }
            let message = format!("{prefix}: {}", problems.join(", "));
            if row.route.is_exact() || strict {
                failures.push(message);
            } else {
                warnings.push(format!("{message} (outside the {SIGMA_GATE}-sigma band)"));
            }
        }
        systems.push(report);
    }
    let comparison = spec.comparison.as_ref().map(|c| {
        let report = compare(&systems);
        if let Some(expected) = &c.expected_verdict {
            if *expected != report.verdict {
                failures.push(format!("comparison verdict `{}` differs from expected `{expected}`", report.verdict));
            }
        }
        report
    });
    Ok(ScenarioReport {
        scenario: spec.name.clone(),
        description: spec.description.clone(),
        strict,
        systems,
        comparison,
        provenance: Provenance::default(),
        passed: failures.is_empty(),
        failures,
        warnings,
    })
}

fn compare(systems: &[SystemReport]) -> ComparisonReport {
    let first = &systems[0];
    let different_system = systems.iter().any(|s| s.n_sites != first.n_sites);
    let different_state = systems.iter().any(|s| s.pure != first.pure || s.state_kind != first.state_kind);
    let verdict = match (different_system, different_state) {
        (true, true) => "different system and state",
        (true, false) => "different system",
        (false, true) => "different state",
        (false, false) => "same system and state",
    };
    ComparisonReport {
        verdict: verdict.to_string(),
        different_system,
        different_state,
        systems: systems.iter().map(|s| format!("{}: {}", s.label, s.system)).collect(),
        note: "side-by-side only: results belong to distinct systems and are never averaged or merged".to_string(),
    }
}

/// Prepared state: an ensemble decomposition plus, for the maximally mixed
/// case, the density operator built directly as `I/2^N`.
struct Prepared {
    ensemble: Ensemble,
    direct_rho: Option<DensityOperator>,
}

fn member_state(kind: &MemberKind) -> Result<crate::states::MemberState, ScenarioError> {
    Ok(match kind {
        MemberKind::Pattern { axis, pattern } => psi_delta(*axis, pattern).into(),
        MemberKind::Kets(kets) => ProductState::new(kets.clone())?.into(),
        MemberKind::Amplitudes(amps) => PureState::new(amps.clone())?.into(),
    })
}

fn prepare(system: &SystemSpec) -> Result<Prepared, ScenarioError> {
    let n = system.n_sites;
    let needs_trace = system.routes.contains(&Route::Trace);
    Ok(match &system.state {
        StateSpec::PsiDelta { axis, pattern } => {
            let pattern = match pattern {
                Some(p) => p.clone(),
                None => SignPattern::first_balanced(n)?,
            };
            Prepared { ensemble: Ensemble::pure(psi_delta(*axis, &pattern)), direct_rho: None }
        }
        StateSpec::BalancedMixture { axis } => Prepared { ensemble: balanced_mixture(*axis, n)?, direct_rho: None },
        StateSpec::MaximallyMixed => Prepared {
            ensemble: maximally_mixed_ensemble(n)?,
            direct_rho: if needs_trace { Some(maximally_mixed(n)?) } else { None },
        },
        StateSpec::CustomSingleSpin { ket } => {
            Prepared { ensemble: Ensemble::pure(ProductState::new(vec![*ket])?), direct_rho: None }
        }
        StateSpec::CustomEnsemble { members } => {
            let members = members
                .iter()
                .map(|m| Ok((m.weight, member_state(&m.state)?)))
                .collect::<Result<Vec<_>, ScenarioError>>()?;
            Prepared { ensemble: Ensemble::new(members)?, direct_rho: None }
        }
    })
}

enum BuiltObservable {
    Local { obs: CollectiveObservable, collective_axis: Option<crate::Axis> },
    Dense(DenseOperator),
}

impl BuiltObservable {
    fn as_observable(&self) -> &dyn Observable {
        match self {
            BuiltObservable::Local { obs, .. } => obs,
            BuiltObservable::Dense(d) => d,
        }
    }
}

fn build_observable(spec: &ObservableSpec, n: usize) -> Result<BuiltObservable, ScenarioError> {
    Ok(match &spec.kind {
        ObservableKind::Collective(axis) => {
            BuiltObservable::Local { obs: collective(*axis, n)?, collective_axis: Some(*axis) }
        }
        ObservableKind::Site { site, axis } => {
            BuiltObservable::Local { obs: CollectiveObservable::site(*axis, *site, n)?, collective_axis: None }
        }
        ObservableKind::Terms(terms) => {
            let terms: Vec<LocalSpinTerm> = terms.clone();
            BuiltObservable::Local { obs: CollectiveObservable::new(n, terms)?, collective_axis: None }
        }
        ObservableKind::Matrix(rows) => BuiltObservable::Dense(DenseOperator::from_rows(rows)?),
    })
}

fn system_tag(n: usize, pure: bool) -> String {
    format!("{n} spin{}, {}", if n == 1 { "" } else { "s" }, if pure { "pure" } else { "mixed" })
}

fn is_pure(system: &SystemSpec, prepared: &Prepared, rho: Option<&DensityOperator>) -> Result<bool, ScenarioError> {
    if matches!(system.state, StateSpec::MaximallyMixed) {
        return Ok(false);
    }
    if prepared.ensemble.len() == 1 {
        return Ok(true);
    }
    if let Some(rho) = rho {
        return Ok((rho.purity() - 1.0).abs() < 1e-10);
    }
    if system.n_sites <= DEFAULT_DENSE_CAP {
        return Ok((density_from_ensemble(&prepared.ensemble)?.purity() - 1.0).abs() < 1e-10);
    }
    Ok(false)
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

/// Statistical band for a sampled (mean, variance) pair around an exact target.
fn within_band(stats: &SampleStats, mean: f64, variance: f64) -> bool {
    let shots = stats.shots as f64;
    let var_band = if stats.shots > 1 { SIGMA_GATE * (2.0 / (shots - 1.0)).sqrt() * variance } else { f64::INFINITY };
    within(stats.empirical_mean, mean, SIGMA_GATE * stats.stderr_mean + TOLERANCE)
        && within(stats.empirical_variance, variance, var_band + TOLERANCE)
}

fn run_system(system: &SystemSpec) -> Result<SystemReport, ScenarioError> {
    let n = system.n_sites;
    let prepared = prepare(system)?;
    let rho = if system.routes.contains(&Route::Trace) {
        Some(match &prepared.direct_rho {
            Some(r) => r.clone(),
            None => density_from_ensemble(&prepared.ensemble)?,
        })
    } else {
        None
    };
    let pure = is_pure(system, &prepared, rho.as_ref())?;
    let mut rows = Vec::new();
    for spec in &system.observables {
        let obs = build_observable(spec, n)?;
        let expected_mean =
            spec.expected_mean.as_ref().map(|v| v.eval(n)).transpose().map_err(ScenarioError::Semantic)?;
        let expected_variance =
            spec.expected_variance.as_ref().map(|v| v.eval(n)).transpose().map_err(ScenarioError::Semantic)?;

        let mut results: Vec<(Route, RouteResult)> = Vec::new();
        for &route in &system.routes {
            let result = match route {
                Route::Dense => RouteResult::Exact(moments_ensemble(&prepared.ensemble, obs.as_observable())?),
                Route::Trace => {
                    let rho = rho.as_ref().expect("built when trace is requested");
                    RouteResult::Exact(moments_trace(rho, obs.as_observable())?)
                }
                Route::ProductFast => match &obs {
                    BuiltObservable::Local { obs: local, collective_axis } => {
                        let single = (prepared.ensemble.len() == 1)
                            .then(|| prepared.ensemble.members()[0].state.as_product())
                            .flatten();
                        RouteResult::Exact(match (single, collective_axis) {
                            (Some(state), Some(axis)) => moments_product_fast(state, *axis),
                            _ => moments_product_fast_ensemble(&prepared.ensemble, local)?,
                        })
                    }
                    BuiltObservable::Dense(_) => RouteResult::Skipped {
                        reason: "product-fast needs a one-local observable, not a dense matrix".into(),
                    },
                },
                Route::MonteCarlo => match &obs {
                    BuiltObservable::Local { collective_axis: Some(axis), .. } => {
                        let records = sample_shots(&prepared.ensemble, *axis, system.shots, system.seed)?;
                        RouteResult::Sampled(empirical_stats(&records)?)
                    }
                    _ => RouteResult::Skipped { reason: "monte-carlo measures the total spin S_axis only".into() },
                },
            };
            results.push((route, result));
        }

        let exact: Vec<MomentReport> = results
            .iter()
            .filter_map(|(_, r)| match r {
                RouteResult::Exact(m) => Some(*m),
                _ => None,
            })
            .collect();
        let exact_agree = exact.iter().all(|a| {
            exact
                .iter()
                .all(|b| within(a.mean, b.mean, ROUTE_AGREEMENT) && within(a.variance, b.variance, ROUTE_AGREEMENT))
        });
        let reference: Option<MomentReport> = match exact.first() {
            Some(m) => Some(*m),
            None => match &obs {
                BuiltObservable::Local { obs: local, .. } => {
                    Some(moments_product_fast_ensemble(&prepared.ensemble, local)?)
                }
                BuiltObservable::Dense(_) => None,
            },
        };

        for (route, result) in results {
            let (expectation_met, agrees) = match &result {
                RouteResult::Exact(m) => {
                    let met = (expected_mean.is_some() || expected_variance.is_some()).then(|| {
                        expected_mean.is_none_or(|e| within(m.mean, e, spec.tolerance))
                            && expected_variance.is_none_or(|e| within(m.variance, e, spec.tolerance))
                    });
                    (met, (exact.len() > 1).then_some(exact_agree))
                }
                RouteResult::Sampled(stats) => {
                    let met = match (expected_mean, expected_variance) {
                        (None, None) => None,
                        (m, v) => {
                            let m = m.or(reference.map(|r| r.mean)).unwrap_or(stats.empirical_mean);
                            let v = v.or(reference.map(|r| r.variance)).unwrap_or(stats.empirical_variance);
                            Some(within_band(stats, m, v))
                        }
                    };
                    (met, reference.map(|r| within_band(stats, r.mean, r.variance)))
                }
                RouteResult::Skipped { .. } => (None, None),
            };
            let status = if matches!(result, RouteResult::Skipped { .. }) {
                Status::Skip
            } else if expectation_met == Some(false) || agrees == Some(false) {
                Status::Fail
            } else {
                Status::Pass
            };
            rows.push(RouteRow {
                observable: spec.label.clone(),
                route,
                result,
                expected_mean,
                expected_variance,
                expectation_met,
                agrees,
                status,
            });
        }
    }
    Ok(SystemReport {
        label: system.label.clone(),
        n_sites: n,
        state_kind: system.state.kind().to_string(),
        pure,
        system: system_tag(n, pure),
        sampling: system
            .routes
            .contains(&Route::MonteCarlo)
            .then_some(Sampling { shots: system.shots, seed: system.seed }),
        rows,
    })
}
