//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p spinmix --test acceptance`.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinmix::observables::{
    collective, diagonal_probability_mean, mean_pure_dense, moments_ensemble, moments_product_fast, moments_pure_dense,
    moments_trace, variance_pure_dense, CollectiveObservable, LocalSpinTerm,
};
use spinmix::sampler::{empirical_stats, sample_shots};
use spinmix::scenario::{emit_report, load_scenario, run_scenario, Format};
use spinmix::states::{balanced_mixture, density_from_ensemble, maximally_mixed, psi_delta, DensityOperator};
use spinmix::{Axis, PureState, SignPattern, SingleSpinKet, C64};

const EXACT_TOL: f64 = 1e-10;
const SINGLE_SPIN_TOL: f64 = 1e-12;
const FROBENIUS_FLOOR: f64 = 0.1;
const SHORTCUT_GAP: f64 = 0.4;
const SIGMA: f64 = 5.0;
const TABLE_BUDGET: Duration = Duration::from_secs(5);
const FAST_PATH_BUDGET: Duration = Duration::from_secs(1);
const FUZZ_CASES: usize = 200;
const SHOTS: usize = 100_000;
const SEED: u64 = 4242;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Mean/variance of a collective observable by all three exact routes.
fn three_routes(prep: Axis, n: usize, axis: Axis) -> Result<[(f64, f64); 3], String> {
    let state = psi_delta(prep, &SignPattern::first_balanced(n).map_err(|e| e.to_string())?);
    let pure = state.to_pure_state().map_err(|e| e.to_string())?;
    let obs = collective(axis, n).map_err(|e| e.to_string())?;
    let dense = moments_pure_dense(&pure, &obs).map_err(|e| e.to_string())?;
    let rho = density_from_ensemble(&spinmix::Ensemble::pure(state.clone())).map_err(|e| e.to_string())?;
    let trace = moments_trace(&rho, &obs).map_err(|e| e.to_string())?;
    let fast = moments_product_fast(&state, axis);
    Ok([(dense.mean, dense.variance), (trace.mean, trace.variance), (fast.mean, fast.variance)])
}

fn pure_state_table(prep: Axis, other: Axis) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [2usize, 4, 8] {
        let quarter_n = n as f64 / 4.0;
        for (axis, want_var) in [(prep, 0.0), (other, quarter_n)] {
            for (route, (mean, var)) in ["dense", "trace", "product-fast"].iter().zip(three_routes(prep, n, axis)?) {
                let dev = mean.abs().max((var - want_var).abs());
                worst = worst.max(dev);
                check(dev < EXACT_TOL, format!("N={n} S_{axis} via {route}: ({mean}, {var}) vs (0, {want_var})"))?;
            }
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < TABLE_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("max deviation {worst:.1e}, {elapsed:.2?}"))
}

fn criterion_1() -> Outcome {
    pure_state_table(Axis::X, Axis::Z)
}

fn criterion_2() -> Outcome {
    pure_state_table(Axis::Z, Axis::X)
}

fn criterion_3() -> Outcome {
    let ens = balanced_mixture(Axis::X, 4).map_err(|e| e.to_string())?;
    let sx = collective(Axis::X, 4).unwrap();
    let by_members = moments_ensemble(&ens, &sx).map_err(|e| e.to_string())?;
    let by_trace = moments_trace(&density_from_ensemble(&ens).unwrap(), &sx).map_err(|e| e.to_string())?;
    for (route, r) in [("ensemble", by_members), ("trace", by_trace)] {
        check(
            r.mean.abs() < EXACT_TOL && r.variance.abs() < EXACT_TOL,
            format!("S_x via {route}: ({}, {})", r.mean, r.variance),
        )?;
    }

    // oracle: the z mixture is diagonal with weight 1/6 on the six basis
    // states holding two down spins; I/16 is 1/16 on the diagonal
    let oracle = DMatrix::<C64>::from_fn(16, 16, |r, c| {
        let mixture = if r == c && (r as u32).count_ones() == 2 { 1.0 / 6.0 } else { 0.0 };
        let identity = if r == c { 1.0 / 16.0 } else { 0.0 };
        C64::new(mixture - identity, 0.0)
    })
    .norm();
    let rho_z = density_from_ensemble(&balanced_mixture(Axis::Z, 4).unwrap()).unwrap();
    let distance = rho_z.frobenius_distance(&maximally_mixed(4).unwrap()).map_err(|e| e.to_string())?;
    check((distance - oracle).abs() < EXACT_TOL, format!("distance {distance} vs oracle {oracle}"))?;
    check(distance > FROBENIUS_FLOOR, format!("distance {distance} not above {FROBENIUS_FLOOR}"))?;
    Ok(format!("S_x (0, 0) on both routes; ||rho_z - I/16||_F = {distance:.6}"))
}

fn criterion_4() -> Outcome {
    for n in [2usize, 4, 8] {
        let rho: DensityOperator = maximally_mixed(n).map_err(|e| e.to_string())?;
        let ens = spinmix::states::maximally_mixed_ensemble(n).unwrap();
        for axis in [Axis::X, Axis::Z] {
            let obs = collective(axis, n).unwrap();
            for r in [moments_trace(&rho, &obs).unwrap(), moments_ensemble(&ens, &obs).unwrap()] {
                check(
                    r.mean.abs() < EXACT_TOL && (r.variance - n as f64 / 4.0).abs() < EXACT_TOL,
                    format!("N={n} S_{axis} via {}: ({}, {})", r.method, r.mean, r.variance),
                )?;
            }
        }
    }
    Ok("mean 0, variance N/4 for N = 2, 4, 8".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let state = psi_delta(Axis::X, &SignPattern::first_balanced(1_000_000).unwrap());
    let r = moments_product_fast(&state, Axis::Z);
    let elapsed = start.elapsed();
    check(r.variance == 250_000.0, format!("variance {} != 250000", r.variance))?;
    check(r.mean == 0.0, format!("mean {}", r.mean))?;
    check(elapsed < FAST_PATH_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!("variance {} in {elapsed:.2?}", r.variance))
}

fn criterion_6() -> Outcome {
    let ket = SingleSpinKet::new(C64::new(0.5, 0.0), C64::new(0.0, 3f64.sqrt() / 2.0)).map_err(|e| e.to_string())?;
    let v = spinmix::algebra::tensor_state(&[ket]).unwrap();
    let sy = collective(Axis::Y, 1).unwrap();
    let mean = mean_pure_dense(&v, &sy).unwrap();
    let var = variance_pure_dense(&v, &sy).unwrap();
    check((mean - 3f64.sqrt() / 4.0).abs() < SINGLE_SPIN_TOL, format!("<s_y> = {mean}"))?;
    check((var - 1.0 / 16.0).abs() < SINGLE_SPIN_TOL, format!("Var(s_y) = {var}"))?;
    let basis = [PureState::basis(1, 0).unwrap(), PureState::basis(1, 1).unwrap()];
    let shortcut = diagonal_probability_mean(&v, &sy, &basis).unwrap();
    check(shortcut.abs() < SINGLE_SPIN_TOL, format!("diagonal shortcut gave {shortcut}"))?;
    check((mean - shortcut).abs() > SHORTCUT_GAP, format!("gap {}", (mean - shortcut).abs()))?;
    Ok(format!("<s_y> = {mean:.15}, Var = {var}, z-basis shortcut = {shortcut}"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_mean, mut worst_var): (f64, f64) = (0.0, 0.0);
    for _ in 0..FUZZ_CASES {
        let n = rng.random_range(1..=5);
        let members = rng.random_range(1..=8);
        let ens = common::random_ensemble(&mut rng, n, members);
        let terms: Vec<LocalSpinTerm> = (0..rng.random_range(1..=2 * n))
            .map(|_| LocalSpinTerm {
                site: rng.random_range(1..=n),
                axis: common::random_axis(&mut rng),
                coefficient: rng.random_range(-2.0..2.0),
            })
            .collect();
        let obs = CollectiveObservable::new(n, terms).unwrap();
        let a = moments_ensemble(&ens, &obs).map_err(|e| e.to_string())?;
        let b = moments_trace(&density_from_ensemble(&ens).unwrap(), &obs).map_err(|e| e.to_string())?;
        worst_mean = worst_mean.max((a.mean - b.mean).abs());
        worst_var = worst_var.max((a.variance - b.variance).abs());
    }
    check(worst_mean < EXACT_TOL && worst_var < EXACT_TOL, format!("max deviations {worst_mean:e}, {worst_var:e}"))?;
    Ok(format!("{FUZZ_CASES} cases, max deviation mean {worst_mean:.1e}, variance {worst_var:.1e}"))
}

fn criterion_8() -> Outcome {
    let fh = run_scenario(&load_scenario("fh-single-spin-mixed").unwrap()).map_err(|e| e.to_string())?;
    for row in fh.systems[0].rows.iter().filter(|r| r.observable == "s_x") {
        let (m, v) = (row.result.mean().unwrap(), row.result.variance().unwrap());
        check(m.abs() < EXACT_TOL && (v - 0.25).abs() < EXACT_TOL, format!("s_x via {}: ({m}, {v})", row.route))?;
    }
    check(fh.systems[0].system == "1 spin, mixed", format!("annotation `{}`", fh.systems[0].system))?;

    let out = Command::new(env!("CARGO_BIN_EXE_spinmix"))
        .args(["run", "fh-comparison", "--format", "text"])
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.code() == Some(0), format!("exit code {:?}", out.status.code()))?;
    let text = String::from_utf8_lossy(&out.stdout);
    check(text.contains("comparison: different system and state"), "verdict missing from report")?;
    check(text.contains("4 spins, pure") && text.contains("1 spin, mixed"), "system tags missing from report")?;

    let report = run_scenario(&load_scenario("fh-comparison").unwrap()).unwrap();
    let verdict = report.comparison.as_ref().map(|c| c.verdict.as_str());
    check(verdict == Some("different system and state"), format!("verdict {verdict:?}"))?;
    let a = &report.systems[0].rows[0].result;
    let b = &report.systems[1].rows[0].result;
    check(a.variance() != b.variance(), "the two systems unexpectedly agree numerically")?;
    Ok("s_x (0, 1/4); fh-comparison exits 0 with verdict `different system and state`".into())
}

fn criterion_9() -> Outcome {
    let state = psi_delta(Axis::X, &SignPattern::first_balanced(4).unwrap());
    let z = empirical_stats(&sample_shots(&state, Axis::Z, SHOTS, SEED).unwrap()).unwrap();
    check(
        (z.empirical_variance - 1.0).abs() <= SIGMA * z.stderr_mean,
        format!("variance {} vs 1.0, stderr {}", z.empirical_variance, z.stderr_mean),
    )?;
    let x = sample_shots(&state, Axis::X, SHOTS, SEED).unwrap();
    check(x.iter().all(|s| s.total == 0.0), "a shot along x had a non-zero total")?;

    let spec = load_scenario("stern-gerlach-x").unwrap();
    let first = emit_report(&run_scenario(&spec).unwrap(), Format::Structured);
    let second = emit_report(&run_scenario(&spec).unwrap(), Format::Structured);
    check(first == second, "structured reports differ between runs")?;
    let cli = || {
        Command::new(env!("CARGO_BIN_EXE_spinmix"))
            .args(["run", "stern-gerlach-x", "--format", "csv"])
            .output()
            .map(|o| o.stdout)
            .map_err(|e| e.to_string())
    };
    check(cli()? == cli()?, "CLI reports differ between runs")?;
    Ok(format!(
        "Var(S_z) = {:.5} (|dev| {:.5} <= {:.5}), all {SHOTS} S_x totals 0, reports byte-identical",
        z.empirical_variance,
        (z.empirical_variance - 1.0).abs(),
        SIGMA * z.stderr_mean
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("pure-state table, x preparation", criterion_1),
        ("isotropy, z preparation", criterion_2),
        ("balanced mixture", criterion_3),
        ("totally unpolarized", criterion_4),
        ("large-N fast path", criterion_5),
        ("single-spin |V> example", criterion_6),
        ("trace/ensemble equivalence fuzz", criterion_7),
        ("FH diagnosis scenario", criterion_8),
        ("Monte Carlo consistency", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} [{name}]: PASS - {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL - {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
