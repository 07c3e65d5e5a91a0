//! Scenario-driven front end for the quaternionic engine: parses JSON
//! scenarios, runs evolution plus the selected identity checks, and writes
//! CSV time series and JSON residual reports.

pub mod error;
pub mod runner;
pub mod scenario;
pub mod suite;

pub use error::CliError;
pub use runner::{run_scenario, RunOutcome};
pub use scenario::Scenario;
pub use suite::{verify, SuiteOutcome};

/// Exit code when every check passes.
pub const EXIT_PASS: i32 = 0;
/// Exit code when at least one check fails its tolerance.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit code for parse, validation, numerical or I/O errors.
pub const EXIT_ERROR: i32 = 2;
