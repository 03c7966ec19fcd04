use thiserror::Error;

use crate::label::Label;
use crate::trie::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("DuplicateEdgeLabel: node {parent} already has a child labeled {label}")]
    DuplicateEdgeLabel { parent: NodeId, label: Label },
    #[error("UnknownNode: {0} is not a live node")]
    UnknownNode(NodeId),
    #[error("ReservedLabel: code point 0 is reserved for the sentinel")]
    ReservedLabel,
    #[error("NotALeaf: node {0} has children")]
    NotALeaf(NodeId),
    #[error("IsRoot: the root cannot be deleted")]
    IsRoot,
    #[error("DistanceOutOfRange: {k} exceeds depth {depth}")]
    DistanceOutOfRange { k: usize, depth: usize },
    #[error("EmptyTrie: the trie has no edges")]
    EmptyTrie,
    #[error("StaleParentState: groups of node {0} are not available")]
    StaleParentState(NodeId),
    #[error("UndoMismatch: record was issued for node {expected}, not {got}")]
    UndoMismatch { expected: NodeId, got: NodeId },
    #[error("UnknownElement: list element {0} is not live")]
    UnknownElement(usize),
    #[error("ColorAbsent: element {elem} does not carry color {color}")]
    ColorAbsent { elem: usize, color: Label },
    #[error("ElementStillColored: element {0} must be uncolored before deletion")]
    ElementStillColored(usize),
    #[error("UnknownEngine: {0}")]
    UnknownEngine(String),
    #[error("UnknownTarget: {0}")]
    UnknownTarget(String),
    #[error("InconsistentState: {0}")]
    InconsistentState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
