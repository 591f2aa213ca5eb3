use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every way the pipeline can refuse an input.
///
/// Variants fall into three families (configuration, data, numerical) which
/// the command-line front end maps onto distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("csv error at row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error("dates not strictly increasing at {date}")]
    UnsortedDates { date: NaiveDate },
    #[error("duplicate date {date}")]
    DuplicateDate { date: NaiveDate },
    #[error("series '{name}' has zero usable rows")]
    NoUsableRows { name: String },
    #[error("series '{name}' has a non-finite value at {date}")]
    NonFinite { name: String, date: NaiveDate },
    #[error("series '{name}' has non-positive value {value} at {date}")]
    NonPositive { name: String, date: NaiveDate, value: f64 },
    #[error("series '{name}' needs at least {needed} observations, got {got}")]
    TooShort { name: String, needed: usize, got: usize },
    #[error("duplicate series name '{0}'")]
    DuplicateName(String),
    #[error("series dates have empty intersection: {ranges}")]
    EmptyIntersection { ranges: String },
    #[error("no series supplied")]
    NoSeries,
    #[error("column '{0}' not found")]
    MissingColumn(String),
    #[error("event date {date} is not a trading date in the panel")]
    EventDateAbsent { date: NaiveDate },
    #[error("event date {date} is after the last panel date {last}")]
    EventAfterPanel { date: NaiveDate, last: NaiveDate },
    #[error("insufficient history for window [{start}, {end}]: {missing} rows missing")]
    InsufficientHistory { start: i64, end: i64, missing: usize },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty sample: {0}")]
    EmptySample(String),

    #[error("benchmark returns have zero variance; slope undefined")]
    ZeroVarianceBenchmark,
    #[error("rank-deficient design: column '{column}' is linearly dependent on {others}")]
    RankDeficient { column: String, others: String },
    #[error("singular cross-product matrix")]
    Singular,
    #[error("need more observations than regressors: n = {n}, k = {k}")]
    TooFewObservations { n: usize, k: usize },
    #[error("degenerate event dummy: {0}")]
    DegenerateDummy(String),
    #[error("non-finite entry in design matrix column '{0}'")]
    NonFiniteDesign(String),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("degrees of freedom must be at least 1, got {0}")]
    InvalidDof(u64),
    #[error("offset range [{start}, {end}] outside window [{lo}, {hi}]")]
    OffsetOutOfWindow { start: i64, end: i64, lo: i64, hi: i64 },

    #[error("unknown output format '{0}'")]
    UnknownFormat(String),
    #[error("empty table: {0}")]
    EmptyTable(String),
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("io error: {0}")]
    Io(String),
}

/// Coarse classification of an [`Error`], one per process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Config(_) | UnknownFormat(_) | InvalidWindow(_) | DuplicateName(_) => ErrorClass::Config,
            ZeroVarianceBenchmark
            | RankDeficient { .. }
            | Singular
            | TooFewObservations { .. }
            | DegenerateDummy(_)
            | NonFiniteDesign(_)
            | InvalidProbability(_)
            | InvalidDof(_) => ErrorClass::Numerical,
            _ => ErrorClass::Data,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Config => 2,
            ErrorClass::Data => 3,
            ErrorClass::Numerical => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
