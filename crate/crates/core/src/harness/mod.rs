//! Panels, suites, reports and the command-line front end.

pub mod checks;
pub mod cli;
pub mod config;
pub mod panels;
pub mod report;
pub mod suite;
pub mod verify;

pub use checks::{hospital_ratio_check, rotation_average_check};
pub use config::Config;
pub use suite::{run_classification, ExperimentSpec, SuiteReport};
