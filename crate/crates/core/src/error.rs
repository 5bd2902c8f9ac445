//! Crate-wide error type.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building series, fitting models, or
/// running tests and experiments.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A series, alphabet, or matrix failed a structural check.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A lag was zero or too large for the series it is applied to.
    #[error("invalid lag {lag} for series of length {len}")]
    InvalidLag { lag: usize, len: usize },

    /// The marginal distribution is concentrated on a single category, so
    /// the requested statistic is undefined.
    #[error("degenerate marginal distribution: {0}")]
    DegenerateMarginal(String),

    /// A model specification failed validation (shapes, stochasticity).
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Two objects that must agree in shape or alphabet do not.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// A test or experiment configuration is unusable.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Scenario parameters leave the valid probability range.
    #[error("inadmissible scenario parameter: {0}")]
    InadmissibleScenario(String),

    /// A numerical routine failed to produce a usable result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A text input (sequence file, FASTA, mapping, config) failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for bad input, 3 for numerical
    /// failures inside otherwise valid runs.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 3,
            _ => 2,
        }
    }
}
