use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("field is in {found} representation, expected {expected}")]
    Representation {
        expected: &'static str,
        found: &'static str,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("symbol is not finite at lattice point {point:?}")]
    NonFiniteSymbol { point: [f64; 3] },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("hypothesis violated: {constraint}")]
    Hypothesis { constraint: String },

    #[error("solution blew up at t = {time}")]
    BlowUp { time: f64 },

    #[error("resolution cap exceeded: {0}")]
    ResolutionCap(String),

    #[error("container format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
