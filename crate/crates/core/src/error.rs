use thiserror::Error;

use crate::model::{NodeId, Side};
use crate::walker::Direction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("tree has no nodes")]
    Empty,
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {parent} already has a child on the {side:?} side")]
    SideTaken { parent: NodeId, side: Side },
    #[error("node {node} at depth {depth} exceeds the depth bound {n}")]
    TooDeep { node: NodeId, depth: u32, n: u32 },
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("cannot parse dump line {line}: {content}")]
    Parse { line: usize, content: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("node {at} has no {direction:?} neighbor")]
    NoSuchNeighbor { at: NodeId, direction: Direction },
    #[error("node {0} has not been revealed")]
    NotRevealed(NodeId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("oracle only accepts leaves, but {0} is not a leaf")]
    NotALeaf(NodeId),
    #[error("node {0} must be revealed before it can be queried")]
    NotRevealed(NodeId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
    #[error("invalid search parameters: {0}")]
    Params(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("infeasible instance: {0}")]
    Infeasible(String),
    #[error("fixed target index {k} out of range for {len} nodes")]
    TargetOutOfRange { k: u64, len: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("label {label} out of range for height {h}")]
    OutOfRange { label: u64, h: u32 },
    #[error("label {0} was already queried")]
    Duplicate(u64),
    #[error("height {h} is beyond the supported bound {max}")]
    TooLarge { h: u32, max: u32 },
    #[error("the game is already over")]
    GameOver,
    #[error("query {query} is not allowed for active range [{lo}, {hi}]")]
    Disallowed { query: u64, lo: u64, hi: u64 },
}
