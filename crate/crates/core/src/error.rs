use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,
    #[error("need at least {needed} points, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("points {index} and {} are not 8-adjacent", index + 1)]
    NotConnected { index: usize },
    #[error("x is not strictly increasing at point {index}")]
    NonMonotone { index: usize },
    #[error("slope undefined between vertically aligned points")]
    VerticalPair,
    #[error("slope {0} lies outside [0, 1]")]
    SlopeOutOfRange(String),
    #[error("slope evaluation too close to a rounding boundary at dx={dx}")]
    Precision { dx: i64 },
    #[error("chain symbol {0} is outside 0..=7")]
    InvalidSymbol(u8),
    #[error("anchor offset {k} lies outside [-{b}, {a}]")]
    OffsetOutOfRange { k: String, a: String, b: String },
    #[error("segment slope is not an exact rational")]
    InexactSlope,
    #[error("step reaches chessboard distance {got} from the anchor, expected {expected}")]
    DistanceMismatch { expected: i64, got: i64 },
    #[error("next point is not 8-adjacent to the previous one")]
    NotAdjacent,
    #[error("points are not normalized to the first octant with unit x steps (at {index})")]
    Unnormalized { index: usize },
    #[error("variant index {index} out of range for period {period}")]
    VariantOutOfRange { index: usize, period: i64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Coarse grouping of [`Error`] used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    DataFormat,
    Precision,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Precision { .. } => ErrorClass::Precision,
            Error::SlopeOutOfRange(_) | Error::VariantOutOfRange { .. } => ErrorClass::Usage,
            _ => ErrorClass::DataFormat,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
