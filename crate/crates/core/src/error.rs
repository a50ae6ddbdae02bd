// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("enumeration refused: {states} candidate states exceed the cap of {cap}")]
    EnumerationCap { states: f64, cap: u64 },

    #[error("conforming set is empty")]
    EmptyConformingSet,

    #[error("unsupported tradeoff family for {op}: {family}")]
    UnsupportedFamily { op: &'static str, family: String },

    #[error("tradeoff function is trivial or invalid: {0}")]
    TrivialTradeoff(String),

    #[error("linear program exceeded {0} pivots")]
    IterationCap(usize),

    #[error("rejection sampler aborted after {0} consecutive rejections")]
    RejectionCap(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
