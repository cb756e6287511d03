use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{message}, line {line}")]
    Parse { line: usize, message: String },

    #[error("unsupported syntax: {0}")]
    UnsupportedSyntax(String),

    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("graph is not strongly connected")]
    NotStronglyConnected,

    #[error("strongly connected graph has no cycle, its period is undefined")]
    Acyclic,

    #[error("not primitive: period is {0}, expected 1")]
    PeriodNotOne(String),

    #[error("invalid modulus {0}")]
    InvalidModulus(usize),

    #[error("lcm inputs must be positive, got {0}")]
    NonPositive(u64),

    #[error("input violates the reachability normal form: {0}")]
    NormalForm(String),

    #[error("invalid order instance: {0}")]
    InvalidOrder(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown {kind} `{name}`, expected one of: {known}")]
    UnknownName { kind: &'static str, name: String, known: String },
}
