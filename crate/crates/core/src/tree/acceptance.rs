use std::collections::HashMap;

use super::automaton::{StateId, TransitionId, TreeAutomaton};
use super::regular::{NodeId, RegularRun, RegularTree, RunNode};
use crate::error::{Error, Result};
use crate::explore::{explore, Explored};
use crate::game::{Edge, ParityGame, ParityGraph, Strategy, VertexId};
use crate::index::Player;
use crate::solve::{solve, Solver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgNode {
    /// Eve resolves the nondeterminism of the automaton at a tree node.
    Choose { node: NodeId, state: StateId },
    /// Adam picks a direction below a chosen transition.
    Branch { node: NodeId, transition: TransitionId },
}

/// The product of an automaton and a regular tree.
#[derive(Clone, Debug)]
pub struct AcceptanceGame {
    pub game: ParityGame,
    pub nodes: Vec<AgNode>,
    ids: HashMap<AgNode, VertexId>,
}

impl AcceptanceGame {
    pub fn vertex(&self, node: AgNode) -> Option<VertexId> {
        self.ids.get(&node).copied()
    }

    pub fn sidecar(&self, a: &TreeAutomaton) -> String {
        crate::format::write_sidecar(self.nodes.iter().map(|n| match *n {
            AgNode::Choose { node, state } => format!("n{node} {}", a.states()[state]),
            AgNode::Branch { node, transition } => {
                format!("n{node} {}", a.describe_transition(transition))
            }
        }))
    }
}

/// Builds the reachable part of the acceptance game from `(root, q_init)`.
///
/// Eve's moves carry `min(I)`; Adam's moves carry the priority of the
/// chosen direction.
pub fn acceptance_game(a: &TreeAutomaton, t: &RegularTree) -> Result<AcceptanceGame> {
    let letters = t.letters(a)?;
    let lo = a.index().lo();
    let init = AgNode::Choose { node: t.root, state: a.initial() };
    let Explored { game, nodes } = explore(init, a.index(), usize::MAX, |&n| {
        Ok(match n {
            AgNode::Choose { node, state } => {
                let succ = a
                    .from(state, letters[node])
                    .iter()
                    .map(|&transition| (AgNode::Branch { node, transition }, lo))
                    .collect();
                (Player::Eve, succ)
            }
            AgNode::Branch { node, transition } => {
                let tr = a.transition(transition);
                let succ = (0..2)
                    .map(|d| {
                        let next = AgNode::Choose { node: t.succ[node][d], state: tr.target(d) };
                        (next, tr.priorities[d])
                    })
                    .collect();
                (Player::Adam, succ)
            }
        })
    })?;
    let ids = nodes.iter().enumerate().map(|(v, &n)| (n, v)).collect();
    Ok(AcceptanceGame { game, nodes, ids })
}

/// Whether Eve wins the acceptance game, that is, `t` is in the language.
pub fn membership(a: &TreeAutomaton, t: &RegularTree) -> Result<bool> {
    membership_with(a, t, Solver::default())
}

pub fn membership_with(a: &TreeAutomaton, t: &RegularTree, solver: Solver) -> Result<bool> {
    let ag = acceptance_game(a, t)?;
    let result = solve(&ag.game, solver);
    Ok(result.winner(ag.game.initial()) == Player::Eve)
}

/// The run induced by an Eve strategy on the acceptance game.
pub fn run_game(a: &TreeAutomaton, ag: &AcceptanceGame, s: &Strategy) -> Result<RegularRun> {
    let mut ids: HashMap<VertexId, usize> = HashMap::new();
    let mut order = vec![ag.game.initial()];
    ids.insert(ag.game.initial(), 0);
    let mut nodes = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        let AgNode::Choose { node, .. } = ag.nodes[v] else {
            unreachable!("only choice vertices are queued");
        };
        let e = s.get(v).ok_or(Error::StrategyUndefined(v))?;
        let edge = ag.game.edge(e);
        if edge.src != v {
            return Err(Error::StrategyEdge { vertex: v, edge: e });
        }
        let AgNode::Branch { transition, .. } = ag.nodes[edge.dst] else {
            unreachable!("choice vertices lead to branch vertices");
        };
        let tr = a.transition(transition);
        let mut succ = [0; 2];
        for (d, slot) in succ.iter_mut().enumerate() {
            let child = ag
                .vertex(AgNode::Choose { node: ag_succ(ag, edge.dst, d), state: tr.target(d) })
                .expect("successor is in the game");
            *slot = *ids.entry(child).or_insert_with(|| {
                order.push(child);
                order.len() - 1
            });
        }
        nodes.push(RunNode { tree_node: node, transition, succ });
        k += 1;
    }
    Ok(RegularRun { nodes, root: 0 })
}

fn ag_succ(ag: &AcceptanceGame, branch: VertexId, d: usize) -> NodeId {
    match ag.nodes[ag.game.edge(ag.game.out(branch)[d]).dst] {
        AgNode::Choose { node, .. } => node,
        AgNode::Branch { .. } => unreachable!("branch vertices lead to choice vertices"),
    }
}

/// Adam-only graph of a run: edge `2x + d` leaves node `x` in direction `d`
/// with that direction's priority.
pub fn project_priorities(a: &TreeAutomaton, r: &RegularRun) -> ParityGraph {
    let mut edges = Vec::with_capacity(2 * r.len());
    for (x, node) in r.nodes.iter().enumerate() {
        let tr = a.transition(node.transition);
        for d in 0..2 {
            edges.push(Edge { src: x, dst: node.succ[d], priority: tr.priorities[d] });
        }
    }
    ParityGraph::new(r.len(), edges, r.root).expect("run successors are in range")
}

/// The projection as an Adam-only game over the automaton's index.
pub fn projected_game(a: &TreeAutomaton, r: &RegularRun) -> ParityGame {
    ParityGame::adam_only(project_priorities(a, r), a.index()).expect("priorities lie in the index")
}
