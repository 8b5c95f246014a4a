use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The scan window contained the wrong number of resonances.
    #[error("expected exactly one resonance in [{lo}, {hi}] eV, found {found}")]
    ResonanceCount { lo: f64, hi: f64, found: usize },

    /// A linear system or eigen problem could not be solved reliably.
    #[error("numerical conditioning error: {0}")]
    Conditioning(String),

    #[error("quantum yield undefined: all channel powers are zero")]
    UndefinedYield,

    /// Two eigenvectors overlapped equally with a previous branch.
    #[error("eigen-branch tracking ambiguous at sweep index {index}")]
    TrackingAmbiguity { index: usize },

    #[error("calibration did not converge after {iterations} iterations (residuals {residuals:?})")]
    Calibration {
        iterations: usize,
        residuals: Vec<f64>,
    },

    #[error("{0}")]
    Config(#[from] crate::config::ConfigError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code used by the command-line front end: 1 for configuration
    /// problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 1,
            _ => 2,
        }
    }

    /// Short machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::ResonanceCount { .. } => "resonance-count",
            Error::Conditioning(_) => "conditioning",
            Error::UndefinedYield => "undefined-yield",
            Error::TrackingAmbiguity { .. } => "tracking",
            Error::Calibration { .. } => "calibration",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}
