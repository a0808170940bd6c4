use std::path::PathBuf;

use thiserror::Error;

use crate::algebra::EvalError;
use crate::query::ParseError;
use crate::storage::LoadError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    /// 1 for I/O and validation failures, 2 for query errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Load(_) | Error::Io { .. } => 1,
            Error::Parse(_) | Error::Eval(_) => 2,
        }
    }
}
