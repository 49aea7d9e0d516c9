use thiserror::Error;

use crate::model::SchoolId;
use crate::relations::StudentId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown student {0:?}")]
    UnknownStudent(StudentId),

    #[error("relation is not asymmetric: both ({0}, {1}) and ({1}, {0}) present")]
    NotAsymmetric(StudentId, StudentId),

    #[error("reflexive pair ({0}, {0}) in priority relation")]
    Reflexive(StudentId),

    /// No total order extends the relation.
    #[error("{}", cyclic_message(*school))]
    CyclicRelation { school: Option<SchoolId> },

    #[error("priority of school {school} is not a total order")]
    NotTotalOrder { school: SchoolId },

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("{what} exceeds guard: {actual} > {limit}")]
    GuardExceeded {
        what: &'static str,
        limit: u128,
        actual: u128,
    },

    /// A checked invariant failed; this would falsify a proven statement.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn cyclic_message(school: Option<SchoolId>) -> String {
    match school {
        Some(s) => format!("priority relation of school {s} is cyclic"),
        None => "priority relation is cyclic".to_string(),
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Attach a school to a school-less cyclic error.
    pub(crate) fn at_school(self, s: SchoolId) -> Self {
        match self {
            Error::CyclicRelation { school: None } => Error::CyclicRelation { school: Some(s) },
            other => other,
        }
    }
}
