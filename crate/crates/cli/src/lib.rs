//! Sweep engine, verification suite and output formats behind the `xyquench` binary.

pub mod axis;
mod error;
pub mod limits_cmd;
pub mod record;
pub mod sweep;
pub mod verify;

pub use error::CliError;
