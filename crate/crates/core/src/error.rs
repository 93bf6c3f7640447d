use thiserror::Error;

/// Errors surfaced by the homology engine.
///
/// The variants fall into three families that the command-line front end maps
/// to distinct exit codes: bad input, exceeded resource limits, and internal
/// consistency failures (which always indicate a bug, never bad input).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

/// Coarse classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Resource,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) | Error::InvalidDiagram(_) | Error::InvalidArgument(_) => {
                ErrorKind::Input
            }
            Error::ResourceLimit(_) => ErrorKind::Resource,
            Error::Inconsistent(_) => ErrorKind::Internal,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
