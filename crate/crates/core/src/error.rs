use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is out of range (expected {expected})")]
    OutOfRange {
        what: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("not a rational number: {0:?}")]
    ParseRat(String),

    #[error("series must have constant term {expected}, found {found}")]
    ConstantTerm {
        expected: &'static str,
        found: String,
    },

    #[error("cannot substitute a monomial of total degree zero")]
    ZeroDegreeMonomial,

    #[error("series truncated at order {have}, but order {needed} is required")]
    InsufficientTruncation { needed: u64, have: u64 },

    #[error("surface series live in different rings: fibers {left:?} vs {right:?}")]
    RingMismatch { left: Vec<u64>, right: Vec<u64> },

    #[error("{path}:{line}:{column}: malformed surface spec: {message}")]
    SpecParse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: invalid surface spec: {message}")]
    SpecInvalid { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed F cache: {message}")]
    CacheFormat {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unknown verification suite {0:?} (expected lattice, local, series, taubes or all)")]
    UnknownSuite(String),
}
