//! Command implementations behind the `logitkit` binary.
//!
//! Each `cmd_*` function returns a [`RunOutput`] whose payload is rendered
//! as json or tsv on standard output.

pub mod commands;
pub mod error;
pub mod ingest;
pub mod output;

pub use commands::{cmd_curve, cmd_cv, cmd_fit, cmd_predict, cmd_pressq, cmd_test};
pub use error::{CliError, Result};
pub use ingest::{ingest, ingest_design, CsvSpec};
pub use output::{Format, Payload, RunOutput};
