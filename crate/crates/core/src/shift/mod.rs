//! Subshifts of finite type: matrices, vertex and edge graphs, and the
//! splitting/amalgamation/expansion surgeries between edge graphs.

mod canon;
mod graph;
mod matrix;
mod surgery;
mod words;

use thiserror::Error;

pub use canon::{
    canonical_form, canonical_key, canonical_order, isomorphic, isomorphism, GraphKey,
};
pub(crate) use graph::fresh_id;
pub use graph::{edge_graph_of, EdgeGraph, VertexGraph};
pub use matrix::AdjacencyMatrix;
pub use surgery::{amalgamate, contract, expand, in_split, out_split, Direction};
pub use words::{periodic_words, PeriodicWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShiftError {
    #[error("matrix must have at least one row")]
    EmptyMatrix,
    #[error("shape mismatch: expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("transition matrix must have 0/1 entries")]
    NotZeroOne,
    #[error("vertex `{vertex}` has {direction:?}-degree {degree}, need at least 2")]
    DegreeTooSmall {
        vertex: String,
        direction: Direction,
        degree: usize,
    },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("cannot amalgamate `{first}` and `{second}`: {reason}")]
    NotAmalgamable {
        first: String,
        second: String,
        reason: String,
    },
    #[error("no edge `{from}` -> `{to}`")]
    MissingEdge { from: String, to: String },
    #[error("cannot contract `{vertex}`: {reason}")]
    NotContractible { vertex: String, reason: String },
    #[error("not a closed path: {0}")]
    NotClosedPath(String),
}
