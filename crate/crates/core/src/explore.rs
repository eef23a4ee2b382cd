//! Lazy breadth-first expansion of implicitly given games.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::game::{Edge, ParityGame};
use crate::index::{Player, Priority, PriorityIndex};
use crate::par;

/// Default bound on materialized configurations.
pub const DEFAULT_STATE_CAP: usize = 10_000_000;

/// Successors of a node: its owner and the outgoing moves in order.
pub(crate) type Expansion<S> = (Player, Vec<(S, Priority)>);

/// An explored game together with the node behind every vertex id.
#[derive(Clone, Debug)]
pub struct Explored<S> {
    pub game: ParityGame,
    pub nodes: Vec<S>,
}

/// Materializes every node reachable from `init`, level by level.
///
/// Successors of a frontier are computed in parallel and interned in
/// frontier order, so vertex ids do not depend on scheduling.
pub(crate) fn explore<S, F>(init: S, index: PriorityIndex, cap: usize, step: F) -> Result<Explored<S>>
where
    S: Clone + Eq + Hash + Send + Sync,
    F: Fn(&S) -> Result<Expansion<S>> + Sync + Send,
{
    let mut ids: HashMap<S, usize> = HashMap::new();
    let mut nodes = vec![init.clone()];
    ids.insert(init, 0);
    let mut owners: Vec<Player> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut frontier: Vec<usize> = vec![0];

    while !frontier.is_empty() {
        let expanded = {
            let nodes = &nodes;
            par::map(&frontier, |&id| step(&nodes[id]))
        };
        let mut next = Vec::new();
        for (&src, exp) in frontier.iter().zip(expanded) {
            let (owner, succs) = exp?;
            debug_assert_eq!(owners.len(), src);
            owners.push(owner);
            for (s, priority) in succs {
                let dst = match ids.get(&s) {
                    Some(&d) => d,
                    None => {
                        let d = nodes.len();
                        if d >= cap {
                            return Err(Error::StateCap { cap });
                        }
                        ids.insert(s.clone(), d);
                        nodes.push(s);
                        next.push(d);
                        d
                    }
                };
                edges.push(Edge { src, dst, priority });
            }
        }
        frontier = next;
    }
    let game = ParityGame::new(owners, edges, index, 0)?;
    Ok(Explored { game, nodes })
}
