//! Scenario runner: reads a `key = value unit` scenario file, runs one
//! subcommand and emits self-describing CSV curves.

pub mod config;
pub mod curve;
pub mod run;

pub use config::{parse_config, parse_quantity, ConfigError, ScenarioConfig};
pub use curve::{Column, CurveError, ScalarCurve};
pub use run::{run_scenario, run_text, write_outputs, CurveOutput, Overrides, Provenance, RunError, Subcommand};
