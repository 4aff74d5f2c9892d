//! Verification suites and worked demos behind the `hkr` command.
//!
//! A [`SuiteConfig`] selects primes and sizes; [`run_suite`] runs the checks
//! of one module (or all of them) and collects a [`Report`] whose JSON form
//! is byte-identical across runs with the same configuration.

pub mod config;
pub mod demos;
pub mod report;
pub mod suites;

pub use config::{ConfigError, Format, SuiteConfig};
pub use demos::{demo_gm_restricted, demo_projective_space};
pub use report::{CheckRecord, Report, Status};
pub use suites::{run_suite, SUITES};

/// Process exit code for a finished report: 0 when every check passed.
pub fn exit_code(report: &Report) -> i32 {
    if report.passed() {
        0
    } else {
        1
    }
}

/// Exit code for configuration errors.
pub const CONFIG_ERROR_EXIT: i32 = 2;
