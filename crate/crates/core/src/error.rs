use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("weight k={0} is outside 1..=11")]
    InvalidWeight(i64),

    #[error("matrix ({a} {b}; {c} {d}) has determinant {det}, expected 1")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64, det: i64 },

    #[error("matrix ({a} {b}; {c} {d}) is not an upper-triangular Hecke representative")]
    NotTriangular { a: i64, b: i64, c: i64, d: i64 },

    #[error("point is not in the upper half-plane (Im z = {0})")]
    NotInUpperHalfPlane(f64),

    #[error("Whittaker argument must be positive, got y = {0}")]
    NonPositiveArgument(f64),

    #[error("index m={m} is not admissible for {op} at weight k={k}: {reason}")]
    InadmissibleIndex { op: &'static str, k: u32, m: u64, reason: String },

    #[error("operator {op} expects a series with orientation {expected}, got {found}")]
    WrongOrientation { op: &'static str, expected: &'static str, found: &'static str },

    #[error("coefficient c({0}) is required but not known")]
    MissingCoefficient(i64),

    #[error("c(0) vanishes; eigenvalue formulas need c(0) != 0")]
    ZeroConstantCoefficient,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("least-squares system is ill-conditioned (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("unknown fixture `{0}` (expected one of k2, k3, k5, k6)")]
    UnknownFixture(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
