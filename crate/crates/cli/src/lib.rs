//! Configuration, verification suites, the convergence study and report output
//! behind the `tourhom` command.

pub mod config;
pub mod converge;
pub mod regular;
pub mod report;
pub mod suites;

pub use config::{ExperimentConfig, SuiteName};
pub use converge::run_convergence;
pub use report::{Check, RunReport, SuiteReport};
pub use suites::run_suite;
