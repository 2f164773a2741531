//! Verification harness and command-line interface for `ginprod-core`.

pub mod cli;
pub mod error;
pub mod harness;
pub mod report;
pub mod verify;

pub use cli::run;
pub use error::{HarnessError, HarnessResult};
pub use harness::{run_hole_table, run_overcrowding_table, run_radial_verification};
pub use report::{ExperimentReport, Quantity, Reference, Table};
pub use verify::{run_verify, Suite, VerifyOptions};
