//! Parity games, register-based priority transduction games and
//! nondeterministic parity tree automata.

pub mod corpus;
pub mod error;
pub mod even;
pub mod explore;
pub mod format;
pub mod game;
pub mod guidance;
pub mod index;
pub mod par;
pub mod reg;
pub mod solve;
pub mod synthesis;
pub mod tree;

pub use error::{Error, Result};
pub use explore::DEFAULT_STATE_CAP;
pub use game::{Edge, EdgeId, ParityGame, ParityGraph, Play, SolveResult, Strategy, VertexId};
pub use index::{Player, Priority, PriorityIndex};
