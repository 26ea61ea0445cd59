use thiserror::Error;

use crate::height::Height;
use crate::tree::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeightError {
    #[error("subtraction involving +inf on the right-hand side is undefined")]
    InfiniteSubtraction,
    #[error("cannot parse height {0:?}")]
    Parse(String),
}

/// First broken merge-tree invariant found by [`crate::tree::validate`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("tree has no nodes")]
    Empty,
    #[error("node ids are not dense: expected id {expected}, found {found}")]
    NonDenseIds { expected: usize, found: usize },
    #[error("node {node} has unknown parent {parent}")]
    UnknownParent { node: NodeId, parent: NodeId },
    #[error("no root: every node has a parent")]
    NoRoot,
    #[error("multiple roots: nodes {first} and {second} have no parent")]
    MultipleRoots { first: NodeId, second: NodeId },
    #[error("root {node} must have height inf")]
    RootNotInfinite { node: NodeId },
    #[error("non-root node {node} has infinite height")]
    InfiniteNonRoot { node: NodeId },
    #[error("non-increasing: node {node} at height {height} is not below its parent {parent} at height {parent_height}")]
    NonIncreasing { node: NodeId, height: Height, parent: NodeId, parent_height: Height },
    #[error("parent relation has a cycle through node {node}")]
    Cycle { node: NodeId },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Height(#[from] HeightError),
    #[error("invalid merge tree: {0}")]
    InvalidTree(Box<Violation>),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid interleaving: {0}")]
    InvalidInterleaving(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0} is not a critical value")]
    NotCritical(Height),
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<Violation> for Error {
    fn from(violation: Violation) -> Self {
        Error::InvalidTree(Box::new(violation))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
