use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate interval: x_right ({x_right}) must exceed x_left ({x_left})")]
    DegenerateInterval { x_left: f64, x_right: f64 },

    #[error("grid too small: n = {0}, need at least 4 points")]
    GridTooSmall(usize),

    #[error("unsupported upwind accuracy order {0} (supported: 1..=8)")]
    UnsupportedOrder(usize),

    #[error("Fourier operators need an even number of grid points, got {0}")]
    OddFourierGrid(usize),

    #[error("SBP identity check failed: {0}")]
    SbpIdentity(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("relaxation parameter tau must be positive and finite, got {0}")]
    InvalidTau(f64),

    #[error("invalid wave speed: {0}")]
    InvalidSpeed(f64),

    #[error("invalid time step: {0}")]
    InvalidTimeStep(f64),

    #[error("inconsistent tableau {name}: {reason}")]
    InconsistentTableau { name: String, reason: String },

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("singular stage system at stage {stage}")]
    SingularStage { stage: usize },

    #[error("linear solve residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTolerance { residual: f64, tolerance: f64 },

    #[error("non-finite value encountered at t = {0}")]
    NonFinite(f64),

    #[error("Petviashvili iteration: {0}")]
    Petviashvili(String),

    #[error("invalid traveling-wave parameters: {0}")]
    TravelingWave(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("{context}: {source}")]
    Context { context: String, source: Box<Error> },
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input or configuration).
    pub fn is_numerical(&self) -> bool {
        if let Error::Context { source, .. } = self {
            return source.is_numerical();
        }
        matches!(
            self,
            Error::SbpIdentity(_)
                | Error::SingularStage { .. }
                | Error::ResidualTolerance { .. }
                | Error::NonFinite(_)
                | Error::Petviashvili(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<toml::de::Error> for Error {
    fn from(e: toml::de::Error) -> Self {
        Error::Config(e.to_string())
    }
}

/// Attaches a description of what was being computed to an error.
pub(crate) trait ResultExt<T> {
    fn context(self, f: impl FnOnce() -> String) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn context(self, f: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|e| Error::Context {
            context: f(),
            source: Box::new(e),
        })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}
