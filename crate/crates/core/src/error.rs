use crate::structure::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("a space needs at least one vertex")]
    EmptySpace,
    #[error("graph is disconnected: vertex {unreachable} is not reachable from vertex 0")]
    DisconnectedGraph { unreachable: usize },
    #[error("invalid edge ({u}, {v}): {reason}")]
    InvalidEdge { u: usize, v: usize, reason: String },
    #[error("vertex {vertex} is out of range for a space with {len} vertices")]
    VertexOutOfRange { vertex: usize, len: usize },
    #[error("{what} would have {size} vertices, above the cap of {cap}")]
    SizeLimitExceeded { what: &'static str, size: usize, cap: usize },
    #[error("projection target is empty")]
    EmptyTarget,
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("relation conflict: {0}")]
    RelationConflict(String),
    #[error("missing rho point of {of} in {target}")]
    MissingRho { of: String, target: String },
    #[error("dangling reference: {0}")]
    DanglingReference(String),
    #[error("relation axioms violated ({} violations), first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    AxiomViolation(Vec<Violation>),
    #[error("relation axioms must pass before metric axioms are checked ({0} violations)")]
    ValidationFirst(usize),
    #[error("{tuples} realization tuples exceed the budget of {budget}")]
    CombinatorialBlowup { tuples: u64, budget: u64 },
    #[error("{pairs} vertex pairs exceed the pair budget of {budget}")]
    PairBudgetExceeded { pairs: u64, budget: u64 },
    #[error("no pair has both a positive distance and a positive formula sum")]
    DegeneratePairs,
    #[error("invalid configuration: {0}")]
    ConfigValidation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
