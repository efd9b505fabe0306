//! Front end for `kerr-stokes`: scenario files, figure presets, output
//! formats and the verification suite behind the `kerr-stokes` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod verify;

pub use commands::{cmd_figure, cmd_run, cmd_verify, Format, RunOptions};
pub use error::CliError;
