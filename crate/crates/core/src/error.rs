use thiserror::Error;

use crate::index::Priority;
use crate::game::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("vertex {0} has no outgoing edge")]
    DeadEnd(VertexId),

    #[error("priority {priority} on edge {src} -> {dst} is outside index {index}")]
    PriorityOutOfIndex {
        src: VertexId,
        dst: VertexId,
        priority: Priority,
        index: String,
    },

    #[error("reference to undeclared vertex {0}")]
    DanglingVertex(VertexId),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("{0} is not a register of this game")]
    UnknownRegister(u32),

    #[error("escalation violates the sharp-choice rule: observed {observed}, chosen {chosen}")]
    SharpChoice { observed: Priority, chosen: Priority },

    #[error("priority {0} is outside the input index")]
    InputOutOfIndex(Priority),

    #[error("state space exceeded the cap of {cap} configurations")]
    StateCap { cap: usize },

    #[error("strategy is undefined at reachable vertex {0}")]
    StrategyUndefined(VertexId),

    #[error("strategy picks edge {edge} which does not leave vertex {vertex}")]
    StrategyEdge { vertex: VertexId, edge: usize },

    #[error("invalid automaton: {0}")]
    Automaton(String),

    #[error("invalid tree: {0}")]
    Tree(String),

    #[error("invalid run: {0}")]
    Run(String),

    #[error("guidance error: {0}")]
    Guidance(String),

    #[error("index mismatch: {0}")]
    IndexMismatch(String),

    #[error("tree {0} of the corpus is not accepted by the guiding automaton")]
    NotAccepted(usize),

    #[error("{0}")]
    Unsatisfiable(String),

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
