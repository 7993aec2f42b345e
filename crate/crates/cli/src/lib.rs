//! Command-line front end for the reconstruction library: config files,
//! grid/report serialization, and the `forward`, `reconstruct`, `check`
//! and `equivalence` subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod gridio;
pub mod report;

pub use commands::{
    cmd_check, cmd_equivalence, cmd_forward, cmd_reconstruct, equivalence_outcome, CmdOutcome,
};
pub use config::{ConfigFile, TruthSpec, SCHEMA_VERSION};
pub use error::{CliError, EXIT_CONFIG, EXIT_FLAGGED, EXIT_IO, EXIT_OK, EXIT_PARAMETER, EXIT_SOLVER};
pub use gridio::{format_grid, parse_grid, read_grid, write_grid};
pub use report::{format_report_csv, parse_report_csv, write_report_csv, CSV_HEADER};
