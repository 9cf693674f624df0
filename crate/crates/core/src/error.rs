use thiserror::Error;

/// Invalid or inconsistent run configuration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("degenerate interval [{x_left}, {x_right}]")]
    DegenerateInterval { x_left: f64, x_right: f64 },
    #[error("at least 3 cells are required, got {0}")]
    TooFewCells(usize),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("unknown built-in case `{0}`")]
    UnknownCase(String),
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{0}")]
    Unsupported(String),
}

impl ConfigError {
    pub fn invalid(key: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

/// Failures evaluating a model at a state.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("inadmissible state {state:?}: {reason}")]
    InvalidState { state: Vec<f64>, reason: &'static str },
    #[error("critical point at x = {x}: |gh - u^2| = {gap:e}")]
    CriticalPoint { x: f64, gap: f64 },
    #[error("operation not supported by the {model} model: {what}")]
    Unsupported { model: &'static str, what: &'static str },
}

/// Failures of the local stationary solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StationaryError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("collocation step from x = {x} did not converge in {iterations} iterations (last update {update:e})")]
    NoConvergence {
        x: f64,
        iterations: usize,
        update: f64,
    },
}

/// Failures of the time-stepping machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("stage solve did not converge after {iterations} iterations (residual {residual:e})")]
    StageNoConvergence { iterations: usize, residual: f64 },
    #[error("singular matrix: zero pivot in row {row}")]
    SingularMatrix { row: usize },
    #[error("no wave scale: maximal wave speed is zero")]
    NoWaveScale,
    #[error("steady state not reached within {steps} steps (last rate {rate:e})")]
    NoSteadyState { steps: usize, rate: f64 },
}

/// Top-level error returned by the harness and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Stationary(#[from] StationaryError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code: 2 configuration, 3 solver, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Solver(SolverError::Config(_)) => 2,
            Error::Solver(_) | Error::Model(_) | Error::Stationary(_) => 3,
            Error::Io { .. } => 4,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
