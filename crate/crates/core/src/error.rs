use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Coarse classification used by front ends to pick stable exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Inputs violate a documented precondition.
    Precondition,
    /// A numerical solver failed or detected blow-up.
    Solver,
    /// An asymptotic limit could not be extracted.
    Extraction,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionOutOfRange(usize),
    WrongDimension { expected: usize, found: usize },
    /// Evaluation point outside the declared domain.
    Domain { what: &'static str, value: f64 },
    InvalidSamples(String),
    /// Finite-difference or interpolation resolution insufficient.
    Resolution(String),
    NotEmbeddable { theta: f64, defect: f64 },
    NonPositiveGaussCurvature { theta: f64, curvature: f64 },
    NotAsymptoticallyFlat(String),
    Blowup { last_good: f64, value: f64 },
    Parameter(String),
    Construction(String),
    Interface { lower: f64, upper: f64 },
    Precondition(String),
    Restriction(String),
    Cap(String),
    Solver(String),
    Extraction(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Resolution(_) | Error::Blowup { .. } | Error::Solver(_) => ErrorKind::Solver,
            Error::Extraction(_) | Error::NotAsymptoticallyFlat(_) => ErrorKind::Extraction,
            _ => ErrorKind::Precondition,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionOutOfRange(n) => write!(f, "n out of range [3,7]: {n}"),
            Error::WrongDimension { expected, found } => {
                write!(f, "operation requires n = {expected}, got n = {found}")
            }
            Error::Domain { what, value } => write!(f, "{what} outside domain: {value}"),
            Error::InvalidSamples(msg) => write!(f, "invalid samples: {msg}"),
            Error::Resolution(msg) => write!(f, "insufficient resolution: {msg}"),
            Error::NotEmbeddable { theta, defect } => write!(
                f,
                "not embeddable as a surface of revolution: f^2 - h'^2 = {defect:e} at theta = {theta}"
            ),
            Error::NonPositiveGaussCurvature { theta, curvature } => write!(
                f,
                "Gauss curvature {curvature:e} <= 0 at theta = {theta}; Brown-York mass undefined"
            ),
            Error::NotAsymptoticallyFlat(msg) => write!(f, "no asymptotically flat decay: {msg}"),
            Error::Blowup { last_good, value } => {
                write!(f, "lapse blow-up (u = {value:e}) after last good slice {last_good}")
            }
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::Construction(msg) => write!(f, "construction error: {msg}"),
            Error::Interface { lower, upper } => {
                write!(f, "interface radii disagree: lower {lower} vs upper {upper}")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Restriction(msg) => write!(f, "unsupported input: {msg}"),
            Error::Cap(msg) => write!(f, "no hyperbolic cap: {msg}"),
            Error::Solver(msg) => write!(f, "solver failure: {msg}"),
            Error::Extraction(msg) => write!(f, "extraction failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
