use thiserror::Error;

/// Errors produced by the numerical library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("signal has {values} samples but its grid has {points} points")]
    LengthMismatch { values: usize, points: usize },

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("invalid Lp exponent p = {0}")]
    InvalidExponent(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("target grid [{target_lo}, {target_hi}] extends beyond source domain [{source_lo}, {source_hi}]")]
    Extrapolation {
        target_lo: f64,
        target_hi: f64,
        source_lo: f64,
        source_hi: f64,
    },

    #[error("window rejected: {0}")]
    InvalidWindow(String),

    #[error("window anchor value |g(x0)| = {value:e} is below {threshold:e}; the reconstruction is not invertible")]
    DegenerateAnchor { value: f64, threshold: f64 },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("unsupported pathway: {0}")]
    UnsupportedPathway(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported media: {0}")]
    UnsupportedMedia(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
