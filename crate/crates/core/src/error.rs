use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate vertex label {0:?}")]
    DuplicateVertex(String),
    #[error("empty simplex in the list of maximal simplices")]
    EmptySimplex,
    #[error("unknown vertex label {0:?}")]
    UnknownVertex(String),
    #[error("vertex index {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("complexes with more than {max} vertices are not supported (got {got})")]
    TooManyVertices { got: usize, max: usize },
    #[error("the linear system has no solution")]
    NoSolution,
    #[error("{context}: expected rank {expected}, found {found}")]
    RankDeficient { context: String, expected: usize, found: usize },
    #[error("family violates face agreement on {0}")]
    CompatibilityViolation(String),
    #[error("form has a term of weight above the truncation bound {bound}")]
    WeightOverflow { bound: usize },
    #[error("Gröbner basis computation exceeded the limit of {0} pairs")]
    PairLimit(usize),
    #[error("assertion failed: {0}")]
    AssertionFailure(String),
    #[error("invalid complex description: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
