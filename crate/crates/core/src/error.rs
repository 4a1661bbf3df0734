use thiserror::Error;

/// Errors raised by the discretization and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of a map (non-finite point, empty set).
    #[error("domain error: {0}")]
    Domain(String),

    /// A numeric parameter violates its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The spectral parameter z is not admissible for the requested resolvent.
    #[error("spectral parameter error: {0}")]
    SpectralParameter(String),

    /// Array or grid shapes do not agree.
    #[error("shape error: {0}")]
    Shape(String),

    /// The continuum proxy is too coarse to represent all shifted frequencies.
    #[error("aliasing error: {0}")]
    Aliasing(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    /// An iterative solver stopped before meeting its residual tolerance.
    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    Solver { iterations: usize, residual: f64 },

    #[error("numeric error: {0}")]
    Numeric(String),

    /// A construction (pair, witness) degenerated.
    #[error("construction failure: {0}")]
    Construction(String),

    /// Data unusable for a log-log fit.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// Error annotated with the sweep stage it came from.
    #[error("at h = {h}, stage `{stage}`: {source}")]
    Stage {
        h: f64,
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn at_stage(self, h: f64, stage: &str) -> Error {
        Error::Stage {
            h,
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }

    /// True when the error (or the error it wraps) stems from user configuration.
    pub fn is_configuration(&self) -> bool {
        match self {
            Error::Configuration(_)
            | Error::Parameter(_)
            | Error::SpectralParameter(_)
            | Error::Aliasing(_)
            | Error::Json(_) => true,
            Error::Stage { source, .. } => source.is_configuration(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
