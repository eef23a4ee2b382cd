//! Nondeterministic parity tree automata over regular binary trees.

mod acceptance;
mod automaton;
mod emptiness;
pub mod examples;
mod regular;

pub use acceptance::{
    acceptance_game, membership, membership_with, project_priorities, projected_game, run_game, AcceptanceGame,
    AgNode,
};
pub use automaton::{LetterId, Provenance, StateId, Transition, TransitionId, TreeAutomaton};
pub use emptiness::{is_empty, Emptiness};
pub use regular::{Dir, NodeId, RegularRun, RegularTree, RunNode};
