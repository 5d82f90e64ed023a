use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Every variant maps onto one of two failure classes used by the command
/// line front end: domain/configuration problems (bad input) and numerical
/// failures (the computation itself could not be trusted).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("underdetermined target: top amplitude d_{top} vanishes")]
    UnderdeterminedTarget { top: usize },

    #[error("degenerate schedule: sin(g*tau_{step} * sqrt({level})) = 0")]
    DegenerateSchedule { step: usize, level: usize },

    #[error("measurement impossible: ground-state detection probability {prob:e} is below 1e-14")]
    MeasurementImpossible { prob: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit status used by the command line tool: 1 for rejected input,
    /// 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Config(_)
            | Error::UnderdeterminedTarget { .. }
            | Error::DegenerateSchedule { .. }
            | Error::Io(_) => 1,
            Error::Numerical(_) | Error::MeasurementImpossible { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
