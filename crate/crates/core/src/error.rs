use thiserror::Error;

/// Errors surfaced by the labeling, reduction and simulation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    Validation(String),
    #[error("invalid port map: {0}")]
    InvalidPortMap(String),
    #[error("invalid rotation at node {node}: {msg}")]
    InvalidRotation { node: usize, msg: String },
    #[error("edge direction unresolved at node {0}")]
    UnresolvedDirection(usize),
    #[error("node {0} is not RH-traversable")]
    NotTraversable(usize),
    #[error("odd number of pending single edges at node {0}")]
    OddParity(usize),
    #[error("port map inconsistent with usage at node {node}: {msg}")]
    InconsistentPortMap { node: usize, msg: String },
    #[error("rule not applicable: {0}")]
    NotApplicable(String),
    #[error("used subgraph is not two-way connected")]
    NotTwoWayConnected,
    #[error("spanning tree saturates node {0}")]
    SaturatedTree(usize),
    #[error("no spanning tree without saturated nodes found")]
    NotFound,
    #[error("leaf {0} has no edge outside the tree")]
    MissingOutsideEdge(usize),
    #[error("undefined transition: state {state}, entry port {port}, degree {degree}")]
    UndefinedTransition {
        state: String,
        port: usize,
        degree: usize,
    },
    #[error("enumeration needs {needed} numberings, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("no port numbering yields a spanning RH-cycle")]
    Infeasible,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
