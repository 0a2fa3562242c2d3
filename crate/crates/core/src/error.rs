use thiserror::Error;

use crate::word::FreeWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the identity has no sign")]
    IdentityInput,
    #[error("series of {word} is 1 up to degree {max_degree}")]
    TruncationExceeded { word: FreeWord, max_degree: u32 },
    #[error("{word} already carries the opposite sign")]
    ImmediateClash { word: FreeWord },
    #[error("{word} is longer than the length bound {bound}")]
    LengthExceeded { word: FreeWord, bound: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no control point of {word} lies inside the stage")]
    EmptySupport { word: FreeWord },
    #[error("{word} is not positive")]
    NotPositive { word: FreeWord },
    #[error("invalid order descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("no second order found for {{{constraints}}}: {structured_tried} family members and {candidates_tried} witness candidates tried")]
    NotFound { constraints: String, structured_tried: usize, candidates_tried: usize },
}
