use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the range where the operation is defined.
    #[error("{name} = {value} is outside the valid range {valid}")]
    Domain {
        name: &'static str,
        value: f64,
        valid: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("point {index} has lp norm {norm}, expected {radius}")]
    OffSphere { index: usize, norm: f64, radius: f64 },

    #[error("a code needs at least two points for a minimum distance, it has {0}")]
    TooFewPoints(usize),

    #[error("vector must have at least one coordinate, all finite")]
    BadVector,
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, valid: &'static str) -> Self {
        Error::Domain { name, value, valid }
    }
}
