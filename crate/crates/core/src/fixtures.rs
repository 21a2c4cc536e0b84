//! Coefficient tables shipped with the crate.
//!
//! `k2`, `k3`, `k5` and `k6` are eigenforms at the published spectral
//! parameters, stored verbatim in the series CSV format.

use crate::series::CoefficientSeries;
use crate::{Error, Result};

/// Names accepted by [`load`].
pub const NAMES: [&str; 4] = ["k2", "k3", "k5", "k6"];

const K2: &str = include_str!("../fixtures/k2.csv");
const K3: &str = include_str!("../fixtures/k3.csv");
const K5: &str = include_str!("../fixtures/k5.csv");
const K6: &str = include_str!("../fixtures/k6.csv");

/// Raw CSV text of a fixture.
pub fn text(name: &str) -> Result<&'static str> {
    match name {
        "k2" => Ok(K2),
        "k3" => Ok(K3),
        "k5" => Ok(K5),
        "k6" => Ok(K6),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

/// Parse a fixture by name.
pub fn load(name: &str) -> Result<CoefficientSeries> {
    CoefficientSeries::parse_csv(text(name)?)
}

/// Known data problem attached to a fixture, if any.
///
/// The `k3` table lost its decimal exponents: every entry is a mantissa in
/// `[1, 10)`. Almost every negative coefficient is affected, so relations
/// reading that column are skipped. Positive entries `c(6)`, `c(12)`,
/// `c(13)`, `c(15)`, `c(16)` and `c(19)` are affected too; relations using
/// them are judged and fail.
pub fn negative_column_anomaly(name: &str) -> Option<&'static str> {
    match name {
        "k3" => Some(
            "k3 table prints mantissas without decimal exponents; entries outside [1,10) in magnitude \
             are off by powers of ten (recompute with `solve --k 3 --R 3.31105967012734`)",
        ),
        _ => None,
    }
}
