//! Scenario files, run modes, presets and result tables for the `skycov` runner.

pub mod config;
pub mod experiment;
pub mod output;
pub mod presets;
pub mod scenario;

pub use config::{ConfigError, Diagnostics};
pub use experiment::{estimate_cost, experiment, experiments, run_grid, Experiment, ResultRow};
pub use presets::{preset, presets, Preset};
pub use scenario::{Metric, Mode, Scenario, SweepParam};
