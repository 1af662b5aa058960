use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad parameters supplied by the caller.
    Validation,
    /// Input data that cannot be turned into a valid price history.
    Data,
    /// Numerical or capacity limits (e.g. the enumeration cap).
    Capacity,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("row {row}: malformed csv: {message}")]
    MalformedCsv { row: u64, message: String },

    #[error("missing column `{0}` in csv header")]
    MissingColumn(String),

    #[error("row {row}: cannot parse date `{value}` (expected YYYY-MM-DD)")]
    BadDate { row: u64, value: String },

    #[error("row {row}: cannot parse price `{value}`")]
    BadPrice { row: u64, value: String },

    #[error("row {row}: price {price} is not strictly positive")]
    NonPositivePrice { row: u64, price: f64 },

    #[error("row {row}: duplicate date {date}")]
    DuplicateDate { row: u64, date: NaiveDate },

    #[error("price series needs at least 2 observations, got {0}")]
    TooFewObservations(usize),

    #[error("{which} window {start}..={end} selects {count} prices, need at least 2")]
    EmptyWindow {
        which: &'static str,
        start: NaiveDate,
        end: NaiveDate,
        count: usize,
    },

    #[error(
        "boundaries ({lower}, {upper}) do not bracket the sampled returns [{min}, {max}]"
    )]
    BoundaryBracket {
        lower: f64,
        upper: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("interval index {index} at step {step} outside 1..={max}")]
    IntervalIndexOutOfRange { step: usize, index: usize, max: usize },

    #[error("ordering has {got} steps, expected horizon {expected}")]
    HorizonMismatch { expected: usize, got: usize },

    #[error(
        "exact enumeration needs {orderings} orderings and {arrangements} arrangements, cap is {cap}; use monte carlo"
    )]
    EnumerationCapExceeded {
        orderings: String,
        arrangements: String,
        cap: u64,
    },

    #[error("no study records to aggregate")]
    EmptyRecords,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParameter(_) | Error::HorizonMismatch { .. } => ErrorClass::Validation,
            Error::EnumerationCapExceeded { .. } => ErrorClass::Capacity,
            Error::IntervalIndexOutOfRange { .. } | Error::EmptyRecords => ErrorClass::Validation,
            _ => ErrorClass::Data,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
