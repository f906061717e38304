use thiserror::Error;

use crate::quiver::Vertex;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Lie type `{0}`")]
    InvalidType(String),
    #[error("invalid height function: {0}")]
    InvalidHeight(String),
    #[error("invalid node {node} for type {lie}")]
    InvalidNode { lie: String, node: usize },
    #[error("series horizon exceeded: degree {requested} requested, horizon is {horizon}")]
    HorizonExceeded { requested: i64, horizon: usize },
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("not bar-invariant: {0}")]
    NotBarInvariant(String),
    #[error("vertex {0} is frozen")]
    FrozenVertex(Vertex),
    #[error("vertex {0} is not in the window")]
    VertexNotInWindow(Vertex),
    #[error("window too shallow: requires r_floor <= {required}, got {actual}")]
    WindowTooShallow { required: i32, actual: i32 },
    #[error("index ({0},{1}) is not admissible here")]
    BadIndex(usize, i32),
    #[error("inhomogeneous polynomial: degrees {0} and {1}")]
    Inhomogeneous(String, String),
    #[error("variables of different kinds cannot be paired: {0}")]
    BasisMismatch(String),
    #[error("not in the image: {0}")]
    NotInImage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of internal consistency checks (as opposed to bad input).
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_) | Error::NotDivisible(_) | Error::NotBarInvariant(_))
    }
}
