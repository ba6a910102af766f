//! Front end for the `epn` binary: argument model, cache, CSV and plot output.

pub mod cache;
pub mod commands;
pub mod output;
pub mod plot;

use epn_core::catalog::CatalogError;
use epn_core::epnverify::VerifyError;
use epn_core::groebner::GroebnerError;
use epn_core::secular::SecularError;
use epn_core::solve::SolveError;
use epn_core::spectrum::SpectrumError;
use thiserror::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => 1,
        }
    }
}

impl From<SecularError> for CliError {
    fn from(e: SecularError) -> Self {
        match e {
            SecularError::InvalidDimension(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::BudgetExceeded(_) | SolveError::Groebner(GroebnerError::BudgetExceeded { .. }) => {
                CliError::Budget(e.to_string())
            }
            SolveError::PrecisionTooLow(_) => CliError::Usage(e.to_string()),
            SolveError::Secular(s) => s.into(),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Solve(s) => s.into(),
            CatalogError::Secular(s) => s.into(),
            CatalogError::Fixture(f) => CliError::Numerical(f.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::BadLadder | VerifyError::TooFewRungs { .. } | VerifyError::NoTrials | VerifyError::BadDimension(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::BadWindow(..) | SpectrumError::GridTooSmall | SpectrumError::ComplexTuple => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Numerical(format!("cache serialization: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
