use thiserror::Error;

use crate::treewidth::Violation;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("duplicate hyperedge {0:?}")]
    DuplicateHyperedge(Vec<usize>),

    #[error("empty hyperedge")]
    EmptyHyperedge,

    #[error("repeated vertex {0} inside a hyperedge")]
    RepeatedVertex(usize),

    #[error("edge ({u}, {v}) has invalid weight {weight}")]
    InvalidWeight { u: usize, v: usize, weight: f64 },

    #[error("zero coefficient on term {0:?}")]
    ZeroCoefficient(Vec<usize>),

    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeNotFound(usize, usize),

    #[error("{0:?} is not a hyperedge of the instance")]
    HyperedgeNotFound(Vec<usize>),

    #[error("instance has no edges")]
    EmptyEdgeSet,

    #[error("source set is empty")]
    EmptySources,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("instance has {n} vertices, above the cap of {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(Violation),

    #[error("no bag contains the anchor {0:?}")]
    AnchorNotCovered(Vec<usize>),

    #[error("anchor {0:?} is not contained in the root bag")]
    AnchorNotInRoot(Vec<usize>),

    #[error("invalid angle schedule: {0}")]
    Schedule(String),

    #[error("invalid parameters: {0}")]
    Parameters(String),

    #[error("profile of vertex {0} is identically zero")]
    ZeroProfile(usize),

    #[error("correlation {rho} on edge ({u}, {v}) lies outside [-1, 1]")]
    CorrelationOutOfRange { u: usize, v: usize, rho: f64 },

    #[error("graph must be connected")]
    Disconnected,

    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },

    #[error("inconsistent reduction input: {0}")]
    Reduction(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
