use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Where a non-admissible state was found.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Location {
    pub cell: Option<usize>,
    pub time: Option<f64>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.cell, self.time) {
            (Some(c), Some(t)) => write!(f, " at cell {c}, t = {t}"),
            (Some(c), None) => write!(f, " at cell {c}"),
            (None, Some(t)) => write!(f, " at t = {t}"),
            (None, None) => Ok(()),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-admissible state {state:?}{location}")]
    NonAdmissibleState { state: Vec<f64>, location: Location },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("time step {dt} exceeds the CFL bound {limit}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("subcharacteristic condition violated: squared speed {speed_sq} exceeds {bound}{location}")]
    Subcharacteristic {
        speed_sq: f64,
        bound: f64,
        location: Location,
    },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn non_admissible(state: &[f64]) -> Self {
        Error::NonAdmissibleState {
            state: state.to_vec(),
            location: Location::default(),
        }
    }

    /// Attach cell/time context to a non-admissible state error; other variants pass through.
    pub fn at(self, cell: Option<usize>, time: Option<f64>) -> Self {
        match self {
            Error::NonAdmissibleState { state, location } => Error::NonAdmissibleState {
                state,
                location: Location {
                    cell: cell.or(location.cell),
                    time: time.or(location.time),
                },
            },
            other => other,
        }
    }

    /// Process exit code used by the command line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParam(_) | Error::Config(_) => 1,
            Error::NonAdmissibleState { .. }
            | Error::CflViolation { .. }
            | Error::Subcharacteristic { .. }
            | Error::NoConvergence { .. }
            | Error::Invariant(_)
            | Error::GridMismatch(_) => 2,
            Error::Io(_) => 3,
        }
    }
}
