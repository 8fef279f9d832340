use thiserror::Error;

use crate::coalgebra::CoalgebraError;
use crate::field::FieldError;
use crate::graph::GraphError;
use crate::graph_coalgebra::GraphCoalgebraError;
use crate::group::GroupError;
use crate::json::FormatError;
use crate::realization::RealizationError;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input.
    Input,
    /// A configured enumeration cap was exceeded.
    CapExceeded,
    /// A construction failed its own verification.
    Verification,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
    #[error(transparent)]
    GraphCoalgebra(#[from] GraphCoalgebraError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Field(FieldError::SizeCapExceeded { .. }) => ErrorKind::CapExceeded,
            Error::Field(_) => ErrorKind::Input,
            Error::Group(e) => e.kind(),
            Error::Graph(e) => e.kind(),
            Error::Coalgebra(e) => e.kind(),
            Error::GraphCoalgebra(e) => e.kind(),
            Error::Realization(e) => e.kind(),
            Error::Format(_) => ErrorKind::Input,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
