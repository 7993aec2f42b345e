//! Process-level error with a stable exit code.
//!
//! Exit codes are part of the CLI contract:
//! 0 ok, 2 config/usage, 3 solver, 4 parameter bound, 5 diagnostic flag
//! (1 is reserved for unexpected I/O failures on output).

use std::fmt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_PARAMETER: i32 = 4;
pub const EXIT_FLAGGED: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn solver(message: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_SOLVER,
            message: message.into(),
        }
    }

    pub fn parameter(message: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_PARAMETER,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<kmiter::Error> for CliError {
    fn from(err: kmiter::Error) -> Self {
        use kmiter::Error as E;
        let exit_code = match err {
            E::KmaxOutOfRange { .. }
            | E::InvalidParameter(_)
            | E::DomainMismatch(_)
            | E::NonzeroBoundary { .. }
            | E::TrajectoryLength { .. }
            | E::EmptyTrajectory => EXIT_CONFIG,
            E::GammaInadmissible { .. } => EXIT_PARAMETER,
            E::NonFiniteEval { .. }
            | E::Overflow { .. }
            | E::Resonance { .. }
            | E::ResonantData { .. }
            | E::DivergentMode { .. } => EXIT_SOLVER,
        };
        Self {
            exit_code,
            message: err.to_string(),
        }
    }
}
