use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinmix::scenario::{
    apply_overrides, builtin_names, emit_report, load_scenario, run_scenario_with, Format, Overrides, Route,
};
use spinmix::Axis;

#[derive(Parser)]
#[command(name = "spinmix", version, about = "Collective spin moments of pure and mixed spin-1/2 assemblies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a built-in scenario.
    Run(RunArgs),
    /// List built-in scenarios.
    List,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Path to a scenario file, or the name of a built-in.
    scenario: String,
    /// Override the site count.
    #[arg(long = "n")]
    n_sites: Option<usize>,
    /// Override the preparation axis of psi-delta and balanced-mixture states.
    #[arg(long)]
    axis: Option<Axis>,
    /// Comma-separated routes: dense, trace, product-fast, monte-carlo.
    #[arg(long, value_delimiter = ',')]
    routes: Option<Vec<Route>>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for reports when --out is not given.
    #[arg(long, env = "SPINMIX_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Treat Monte Carlo disagreements as failures.
    #[arg(long)]
    strict: bool,
}

fn run(args: RunArgs) -> Result<bool, Box<dyn std::error::Error>> {
    let mut spec = load_scenario(&args.scenario)?;
    let overrides =
        Overrides { n_sites: args.n_sites, axis: args.axis, routes: args.routes, shots: args.shots, seed: args.seed };
    apply_overrides(&mut spec, &overrides)?;
    let report = run_scenario_with(&spec, args.strict)?;
    let rendered = emit_report(&report, args.format);
    let target = args
        .out
        .or_else(|| args.out_dir.map(|dir| dir.join(format!("{}.{}", report.scenario, args.format.extension()))));
    match target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&path, rendered)?;
        }
        None => print!("{rendered}"),
    }
    if !report.passed {
        let failures = serde_json::json!({ "scenario": report.scenario, "failures": report.failures });
        eprintln!("{failures}");
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for name in builtin_names() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Run(args) => match run(args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
