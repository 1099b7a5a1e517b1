//! Scenario runner wiring the gallery constructions through the
//! verification pipeline: JSON scenario configs in, JSON + CSV reports out,
//! plus the self-contained acceptance suite behind `qdecay selftest`.

pub mod acceptance;
pub mod config;
pub mod runner;

pub use config::{CheckName, MetricSpec, Sampling, ScenarioConfig, Tolerances};
pub use runner::{emit_report, run_scenario, CheckResult, CliError, Report};
