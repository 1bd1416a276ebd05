use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input: no samples")]
    EmptyInput,

    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("row {row}: unknown label {token:?} (expected 0/1 or N/P)")]
    UnknownLabel { row: usize, token: String },

    #[error("degenerate dataset: {positives} positives and {negatives} negatives (both classes are required)")]
    DegenerateClass { positives: usize, negatives: usize },

    #[error("invalid simulation spec: {0}")]
    Simulation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("curve is not a convex hull")]
    NotHull,

    #[error("class priors differ: {a} vs {b}")]
    PriorMismatch { a: f64, b: f64 },

    #[error("render error: {0}")]
    Render(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
