use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qdecay_cli::config::{catalog, CheckName, ScenarioConfig};
use qdecay_cli::runner::{emit_report, run_scenario, CliError};

#[derive(Parser)]
#[command(name = "qdecay", about = "Curvature decay / volume growth verification runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and emit JSON + CSV reports.
    Run {
        config: PathBuf,
        /// Override the sampling seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: qdecay-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict the run to a single named check.
        #[arg(long)]
        check: Option<String>,
    },
    /// List the gallery metrics addressable in a scenario config.
    List,
    /// Run the acceptance suite.
    Selftest,
}

fn run(
    config_path: PathBuf,
    seed: Option<u64>,
    out: Option<PathBuf>,
    check: Option<String>,
) -> ExitCode {
    let text = match std::fs::read_to_string(&config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("config error: cannot read {}: {e}", config_path.display());
            return ExitCode::from(2);
        }
    };
    let mut config: ScenarioConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = seed {
        config.sampling.seed = Some(seed);
    }
    if let Some(name) = check {
        let Some(check) = CheckName::parse(&name) else {
            eprintln!("config error: unknown check {name:?}");
            return ExitCode::from(2);
        };
        if !config.checks.contains(&check) {
            eprintln!("config error: check {name:?} is not part of this scenario");
            return ExitCode::from(2);
        }
        config.checks = vec![check];
    }
    let report = match run_scenario(&config) {
        Ok(r) => r,
        Err(e @ (CliError::Config(_) | CliError::Capability(_))) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let out_dir = out.unwrap_or_else(|| PathBuf::from("qdecay-out"));
    match emit_report(&report, &out_dir) {
        Ok(paths) => {
            for check in &report.checks {
                println!(
                    "check {:17} [{}]",
                    check.name,
                    if check.passed { "PASS" } else { "FAIL" }
                );
            }
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    }
    if report.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            seed,
            out,
            check,
        } => run(config, seed, out, check),
        Command::List => {
            for entry in catalog() {
                println!("{entry}");
            }
            ExitCode::SUCCESS
        }
        Command::Selftest => {
            let results = qdecay_cli::acceptance::run_all();
            let mut all = true;
            for r in &results {
                println!("{}", r.line());
                all &= r.passed;
            }
            if all {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
