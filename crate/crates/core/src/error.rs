use serde::Serialize;
use thiserror::Error;

use crate::cert::CertError;
use crate::coxeter::{BallError, CoxeterError};
use crate::growth::GrowthError;
use crate::oracle::OracleError;
use crate::walks::BoundError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Cert(#[from] CertError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Usage,
    Validation,
    ResourceCap,
}

impl ErrorKind {
    /// Process exit code: 1 usage or parse, 2 validation, 3 resource cap.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 1,
            ErrorKind::Validation => 2,
            ErrorKind::ResourceCap => 3,
        }
    }
}

fn oracle_kind(e: &OracleError) -> ErrorKind {
    match e {
        OracleError::Overflow { .. } | OracleError::ThreadPool(_) => ErrorKind::ResourceCap,
        OracleError::NotRegular { .. } => ErrorKind::Validation,
        _ => ErrorKind::Usage,
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Coxeter(e) if e.is_validation() => ErrorKind::Validation,
            Error::Coxeter(_) => ErrorKind::Usage,
            Error::Ball(BallError::Identification { .. }) => ErrorKind::Validation,
            Error::Ball(_) => ErrorKind::ResourceCap,
            Error::Growth(GrowthError::BracketPrecondition { .. }) => ErrorKind::Usage,
            Error::Growth(_) => ErrorKind::Validation,
            Error::Bound(BoundError::Oracle(e)) => oracle_kind(e),
            Error::Bound(BoundError::InvalidWeights(_) | BoundError::OutsideDomain { .. }) => {
                ErrorKind::Usage
            }
            Error::Bound(BoundError::InsufficientRadius { .. }) => ErrorKind::Usage,
            Error::Bound(_) => ErrorKind::Validation,
            Error::Oracle(e) => oracle_kind(e),
            Error::Cert(_) => ErrorKind::Validation,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind().exit_code()
    }
}
