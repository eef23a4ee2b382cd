//! Edge-labelled parity graphs and games.
//!
//! Priorities sit on edges. Vertex ids are dense naturals `0..n`; edge ids
//! are positions in the edge list. Infinite plays are lassos.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::index::{Player, Priority, PriorityIndex};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub priority: Priority,
}

/// A finite edge-labelled graph with a distinguished initial vertex.
///
/// Dead ends are allowed here; they simply carry no infinite path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
    initial: VertexId,
}

impl ParityGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>, initial: VertexId) -> Result<Self> {
        if initial >= vertex_count {
            return Err(Error::DanglingVertex(initial));
        }
        let mut out = vec![Vec::new(); vertex_count];
        for (id, e) in edges.iter().enumerate() {
            if e.src >= vertex_count {
                return Err(Error::DanglingVertex(e.src));
            }
            if e.dst >= vertex_count {
                return Err(Error::DanglingVertex(e.dst));
            }
            out[e.src].push(id);
        }
        Ok(ParityGraph {
            vertex_count,
            edges,
            out,
            initial,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn initial(&self) -> VertexId {
        self.initial
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    /// Outgoing edge ids of `v`, in edge-list order.
    pub fn out(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v]
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out[v].iter().map(move |&e| self.edges[e].dst)
    }

    pub fn with_initial(&self, initial: VertexId) -> Result<ParityGraph> {
        if initial >= self.vertex_count {
            return Err(Error::DanglingVertex(initial));
        }
        Ok(ParityGraph {
            initial,
            ..self.clone()
        })
    }

    /// Vertices reachable from `roots`, as a membership mask.
    pub fn reachable_from(&self, roots: &[VertexId]) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        let mut queue: VecDeque<VertexId> = VecDeque::new();
        for &r in roots {
            if !seen[r] {
                seen[r] = true;
                queue.push_back(r);
            }
        }
        while let Some(v) = queue.pop_front() {
            for w in self.successors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Shortest edge path from any of `roots` to `target`, if one exists.
    pub fn path_to(&self, roots: &[VertexId], target: VertexId) -> Option<Vec<EdgeId>> {
        let mut parent: Vec<Option<EdgeId>> = vec![None; self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::new();
        for &r in roots {
            if !seen[r] {
                seen[r] = true;
                queue.push_back(r);
            }
        }
        while let Some(v) = queue.pop_front() {
            if v == target {
                let mut path = Vec::new();
                let mut cur = v;
                while let Some(e) = parent[cur] {
                    path.push(e);
                    cur = self.edges[e].src;
                }
                path.reverse();
                return Some(path);
            }
            for &e in &self.out[v] {
                let w = self.edges[e].dst;
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        None
    }

    pub fn max_priority(&self) -> Option<Priority> {
        self.edges.iter().map(|e| e.priority).max()
    }
}

/// A finite parity game: a parity graph whose vertices are owned by Eve or Adam.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGame {
    graph: ParityGraph,
    owners: Vec<Player>,
    index: PriorityIndex,
}

impl ParityGame {
    /// Validates that every vertex has a successor, every endpoint exists and
    /// every priority lies in `index`.
    pub fn new(
        owners: Vec<Player>,
        edges: Vec<Edge>,
        index: PriorityIndex,
        initial: VertexId,
    ) -> Result<Self> {
        for e in &edges {
            if !index.contains(e.priority) {
                return Err(Error::PriorityOutOfIndex {
                    src: e.src,
                    dst: e.dst,
                    priority: e.priority,
                    index: index.to_string(),
                });
            }
        }
        let graph = ParityGraph::new(owners.len(), edges, initial)?;
        if let Some(v) = (0..graph.vertex_count()).find(|&v| graph.out(v).is_empty()) {
            return Err(Error::DeadEnd(v));
        }
        Ok(ParityGame {
            graph,
            owners,
            index,
        })
    }

    /// Turns an owner-erased graph into an Adam-only game.
    pub fn adam_only(graph: ParityGraph, index: PriorityIndex) -> Result<Self> {
        let owners = vec![Player::Adam; graph.vertex_count()];
        ParityGame::new(owners, graph.edges, index, graph.initial)
    }

    pub fn graph(&self) -> &ParityGraph {
        &self.graph
    }

    pub fn into_graph(self) -> ParityGraph {
        self.graph
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.owners[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owners
    }

    pub fn index(&self) -> PriorityIndex {
        self.index
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn initial(&self) -> VertexId {
        self.graph.initial()
    }

    pub fn edges(&self) -> &[Edge] {
        self.graph.edges()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        self.graph.edge(e)
    }

    pub fn out(&self, v: VertexId) -> &[EdgeId] {
        self.graph.out(v)
    }

    pub fn with_initial(&self, initial: VertexId) -> Result<ParityGame> {
        Ok(ParityGame {
            graph: self.graph.with_initial(initial)?,
            owners: self.owners.clone(),
            index: self.index,
        })
    }
}

/// An eventually periodic play: `prefix` followed by `cycle` repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Play {
    pub prefix: Vec<EdgeId>,
    pub cycle: Vec<EdgeId>,
}

impl Play {
    /// Checks incidence of consecutive edges and that the cycle closes.
    pub fn is_valid(&self, g: &ParityGraph) -> bool {
        if self.cycle.is_empty() {
            return false;
        }
        let seq: Vec<EdgeId> = self.prefix.iter().chain(&self.cycle).copied().collect();
        if seq.iter().any(|&e| e >= g.edge_count()) {
            return false;
        }
        let linked = seq
            .windows(2)
            .all(|w| g.edge(w[0]).dst == g.edge(w[1]).src);
        let first = g.edge(self.cycle[0]).src;
        let last = g.edge(*self.cycle.last().unwrap()).dst;
        linked && first == last
    }

    /// The limsup of the play's priorities: the largest priority on the cycle.
    pub fn limsup(&self, g: &ParityGraph) -> Option<Priority> {
        self.cycle.iter().map(|&e| g.edge(e).priority).max()
    }

    pub fn winner(&self, g: &ParityGraph) -> Option<Player> {
        self.limsup(g).map(Player::favoured_by)
    }

    /// Vertex sequence of prefix then one turn of the cycle.
    pub fn vertices(&self, g: &ParityGraph) -> Vec<VertexId> {
        let mut vs = Vec::new();
        let seq: Vec<EdgeId> = self.prefix.iter().chain(&self.cycle).copied().collect();
        if let Some(&first) = seq.first() {
            vs.push(g.edge(first).src);
        }
        vs.extend(seq.iter().map(|&e| g.edge(e).dst));
        vs
    }
}

/// A positional strategy: an edge for each vertex the player owns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub player: Player,
    pub moves: Vec<Option<EdgeId>>,
}

impl Strategy {
    pub fn empty(player: Player, vertex_count: usize) -> Self {
        Strategy {
            player,
            moves: vec![None; vertex_count],
        }
    }

    pub fn get(&self, v: VertexId) -> Option<EdgeId> {
        self.moves.get(v).copied().flatten()
    }

    pub fn set(&mut self, v: VertexId, e: EdgeId) {
        self.moves[v] = Some(e);
    }
}

/// Winner of every vertex plus positional strategies for both players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub winners: Vec<Player>,
    pub eve_strategy: Strategy,
    pub adam_strategy: Strategy,
}

impl SolveResult {
    pub fn winner(&self, v: VertexId) -> Player {
        self.winners[v]
    }

    pub fn region(&self, player: Player) -> Vec<VertexId> {
        (0..self.winners.len())
            .filter(|&v| self.winners[v] == player)
            .collect()
    }

    pub fn eve_region(&self) -> Vec<VertexId> {
        self.region(Player::Eve)
    }

    pub fn adam_region(&self) -> Vec<VertexId> {
        self.region(Player::Adam)
    }

    pub fn strategy(&self, player: Player) -> &Strategy {
        match player {
            Player::Eve => &self.eve_strategy,
            Player::Adam => &self.adam_strategy,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(lo: u32, hi: u32) -> PriorityIndex {
        PriorityIndex::new(lo, hi).unwrap()
    }

    #[test]
    fn rejects_dead_end() {
        let edges = vec![Edge { src: 0, dst: 1, priority: 0 }];
        let err = ParityGame::new(vec![Player::Eve; 2], edges, idx(0, 1), 0).unwrap_err();
        assert!(matches!(err, Error::DeadEnd(1)));
    }

    #[test]
    fn rejects_out_of_index() {
        let edges = vec![Edge { src: 0, dst: 0, priority: 4 }];
        let err = ParityGame::new(vec![Player::Eve], edges, idx(0, 3), 0).unwrap_err();
        assert!(matches!(err, Error::PriorityOutOfIndex { priority: 4, .. }));
    }

    #[test]
    fn rejects_dangling() {
        let edges = vec![Edge { src: 0, dst: 7, priority: 0 }];
        let err = ParityGame::new(vec![Player::Eve], edges, idx(0, 3), 0).unwrap_err();
        assert!(matches!(err, Error::DanglingVertex(7)));
    }

    #[test]
    fn lasso_limsup_is_cycle_max() {
        let edges = vec![
            Edge { src: 0, dst: 1, priority: 5 },
            Edge { src: 1, dst: 2, priority: 2 },
            Edge { src: 2, dst: 1, priority: 3 },
        ];
        let g = ParityGraph::new(3, edges, 0).unwrap();
        let play = Play {
            prefix: vec![0],
            cycle: vec![1, 2],
        };
        assert!(play.is_valid(&g));
        assert_eq!(play.limsup(&g), Some(3));
        assert_eq!(play.winner(&g), Some(Player::Adam));
        assert_eq!(play.vertices(&g), vec![0, 1, 2, 1]);
        let broken = Play {
            prefix: vec![],
            cycle: vec![1],
        };
        assert!(!broken.is_valid(&g));
    }
}
