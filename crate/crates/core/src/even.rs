//! Evenness of owner-erased parity graphs and strategy restriction.

use crate::error::{Error, Result};
use crate::game::{Edge, EdgeId, ParityGame, ParityGraph, Play, SolveResult, Strategy, VertexId};
use crate::index::Player;

/// Outcome of an evenness check. `witness` is an odd-dominated lasso when
/// the graph is not even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenCheck {
    pub even: bool,
    pub witness: Option<Play>,
}

/// True iff every cycle reachable from the initial vertex has an even maximum.
pub fn is_even_graph(g: &ParityGraph) -> EvenCheck {
    is_even_from(g, &[g.initial()])
}

pub fn is_even_from(g: &ParityGraph, roots: &[VertexId]) -> EvenCheck {
    let witness = find_cycle(g, roots, Player::Adam);
    EvenCheck {
        even: witness.is_none(),
        witness,
    }
}

/// True iff every cycle reachable from `roots` has an odd maximum.
pub fn is_odd_from(g: &ParityGraph, roots: &[VertexId]) -> EvenCheck {
    let witness = find_cycle(g, roots, Player::Eve);
    EvenCheck {
        even: witness.is_none(),
        witness,
    }
}

/// Finds a reachable cycle whose maximum priority favours `favoured`.
///
/// Iterated SCC decomposition: inside each non-trivial component the top
/// priority decides; if it has the wrong parity its edges are dropped and
/// the remainder is decomposed again.
pub fn find_cycle(g: &ParityGraph, roots: &[VertexId], favoured: Player) -> Option<Play> {
    let reach = g.reachable_from(roots);
    let verts: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| reach[v]).collect();
    let edges: Vec<EdgeId> = (0..g.edge_count())
        .filter(|&e| reach[g.edge(e).src])
        .collect();
    let mut work = vec![(verts, edges)];
    while let Some((verts, edges)) = work.pop() {
        for (comp, inner) in components(g, &verts, &edges) {
            let Some(top) = inner.iter().map(|&e| g.edge(e).priority).max() else {
                continue;
            };
            if Player::favoured_by(top) == favoured {
                let e = *inner
                    .iter()
                    .find(|&&e| g.edge(e).priority == top)
                    .unwrap();
                return Some(lasso_through(g, roots, &inner, e));
            }
            let lower: Vec<EdgeId> = inner
                .into_iter()
                .filter(|&e| g.edge(e).priority < top)
                .collect();
            work.push((comp, lower));
        }
    }
    None
}

/// Strongly connected components of the subgraph `(verts, edges)` that
/// contain at least one edge, each with its internal edges.
fn components(
    g: &ParityGraph,
    verts: &[VertexId],
    edges: &[EdgeId],
) -> Vec<(Vec<VertexId>, Vec<EdgeId>)> {
    const NONE: usize = usize::MAX;
    let n = g.vertex_count();
    let mut local = vec![NONE; n];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let k = verts.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &e in edges {
        let Edge { src, dst, .. } = *g.edge(e);
        if local[src] != NONE && local[dst] != NONE {
            adj[local[src]].push(local[dst]);
        }
    }

    // Iterative Tarjan.
    let mut index = vec![NONE; k];
    let mut low = vec![0; k];
    let mut on_stack = vec![false; k];
    let mut stack = Vec::new();
    let mut comp_of = vec![NONE; k];
    let mut ncomp = 0;
    let mut counter = 0;
    for start in 0..k {
        if index[start] != NONE {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        index[start] = counter;
        low[start] = counter;
        counter += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if index[w] == NONE {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp_of[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }

    let mut out: Vec<(Vec<VertexId>, Vec<EdgeId>)> = vec![(Vec::new(), Vec::new()); ncomp];
    for (i, &v) in verts.iter().enumerate() {
        out[comp_of[i]].0.push(v);
    }
    for &e in edges {
        let Edge { src, dst, .. } = *g.edge(e);
        if local[src] == NONE || local[dst] == NONE {
            continue;
        }
        let (a, b) = (comp_of[local[src]], comp_of[local[dst]]);
        if a == b {
            out[a].1.push(e);
        }
    }
    out.retain(|(_, inner)| !inner.is_empty());
    out
}

/// Lasso reaching `through` from the roots and closing it inside `inner`.
fn lasso_through(g: &ParityGraph, roots: &[VertexId], inner: &[EdgeId], through: EdgeId) -> Play {
    let Edge { src, dst, .. } = *g.edge(through);
    let sub = ParityGraph::new(
        g.vertex_count(),
        inner.iter().map(|&e| *g.edge(e)).collect(),
        src,
    )
    .expect("subgraph of a valid graph");
    let back = sub
        .path_to(&[dst], src)
        .expect("edge lies in a strongly connected component");
    let mut cycle = vec![through];
    cycle.extend(back.into_iter().map(|local| inner[local]));
    let prefix = g.path_to(roots, src).expect("component is reachable");
    Play { prefix, cycle }
}

/// Keeps only the strategy's edge at `player`'s vertices.
///
/// Fails when the strategy is undefined at a reachable vertex of `player`;
/// unreachable undefined vertices become dead ends.
pub fn restrict_by_strategy(
    game: &ParityGame,
    strategy: &Strategy,
    player: Player,
) -> Result<ParityGraph> {
    restrict_from(game, strategy, player, &[game.initial()])
}

/// As [`restrict_by_strategy`], with reachability measured from `roots`.
pub fn restrict_from(
    game: &ParityGame,
    strategy: &Strategy,
    player: Player,
    roots: &[VertexId],
) -> Result<ParityGraph> {
    let mut edges = Vec::new();
    for v in 0..game.vertex_count() {
        if game.owner(v) != player {
            edges.extend(game.out(v).iter().map(|&e| *game.edge(e)));
            continue;
        }
        if let Some(e) = strategy.get(v) {
            if e >= game.edge_count() || game.edge(e).src != v {
                return Err(Error::StrategyEdge { vertex: v, edge: e });
            }
            edges.push(*game.edge(e));
        }
    }
    let g = ParityGraph::new(game.vertex_count(), edges, game.initial())?;
    let reach = g.reachable_from(roots);
    if let Some(v) = (0..game.vertex_count())
        .find(|&v| reach[v] && game.owner(v) == player && strategy.get(v).is_none())
    {
        return Err(Error::StrategyUndefined(v));
    }
    Ok(g)
}

/// Verifies a solver's output: both strategies stay inside their region and
/// win every play from it.
pub fn check_solution(game: &ParityGame, result: &SolveResult) -> Result<()> {
    for player in [Player::Eve, Player::Adam] {
        let region = result.region(player);
        if region.is_empty() {
            continue;
        }
        let g = restrict_from(game, result.strategy(player), player, &region)?;
        let reach = g.reachable_from(&region);
        if let Some(v) = (0..game.vertex_count()).find(|&v| reach[v] && result.winner(v) != player) {
            return Err(Error::Consistency(format!(
                "{player}'s strategy leaves its winning region at vertex {v}"
            )));
        }
        let check = match player {
            Player::Eve => is_even_from(&g, &region),
            Player::Adam => is_odd_from(&g, &region),
        };
        if let Some(w) = check.witness {
            return Err(Error::Consistency(format!(
                "{player}'s strategy loses along {:?}",
                w.vertices(&g)
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_game;
    use crate::solve::{solve_progress_measures, solve_zielonka};

    fn graph(n: usize, edges: &[(usize, usize, u32)]) -> ParityGraph {
        let edges = edges
            .iter()
            .map(|&(src, dst, priority)| Edge { src, dst, priority })
            .collect();
        ParityGraph::new(n, edges, 0).unwrap()
    }

    #[test]
    fn even_self_loop() {
        assert!(is_even_graph(&graph(1, &[(0, 0, 2)])).even);
    }

    #[test]
    fn odd_self_loop_with_witness() {
        let g = graph(1, &[(0, 0, 1)]);
        let c = is_even_graph(&g);
        assert!(!c.even);
        let w = c.witness.unwrap();
        assert_eq!(w, Play { prefix: vec![], cycle: vec![0] });
        assert_eq!(w.limsup(&g), Some(1));
    }

    #[test]
    fn two_cycle_dominated_by_even() {
        assert!(is_even_graph(&graph(2, &[(0, 1, 1), (1, 0, 2)])).even);
    }

    #[test]
    fn nested_odd_cycle_is_found() {
        // Outer cycle has max 4, but 1 <-> 2 loops with max 3.
        let g = graph(3, &[(0, 1, 4), (1, 2, 3), (2, 1, 0), (2, 0, 2)]);
        let c = is_even_graph(&g);
        assert!(!c.even);
        let w = c.witness.unwrap();
        assert!(w.is_valid(&g));
        assert_eq!(w.limsup(&g), Some(3));
    }

    #[test]
    fn unreachable_odd_cycle_ignored() {
        let g = graph(2, &[(0, 0, 2), (1, 1, 1)]);
        assert!(is_even_graph(&g).even);
        assert!(!is_even_from(&g, &[1]).even);
    }

    #[test]
    fn dead_ends_carry_no_cycle() {
        assert!(is_even_graph(&graph(2, &[(0, 1, 1)])).even);
    }

    #[test]
    fn restriction_without_owned_vertices_is_identity() {
        let game = parse_game("paritygame 1 0 3 0;\n0 A: 1@1,0@2;\n1 A: 0@3;\n").unwrap();
        let s = Strategy::empty(Player::Eve, 2);
        let g = restrict_by_strategy(&game, &s, Player::Eve).unwrap();
        assert_eq!(&g, game.graph());
    }

    #[test]
    fn restriction_needs_moves_at_reachable_vertices() {
        let game = parse_game("paritygame 1 0 3 0;\n0 E: 1@1,0@2;\n1 A: 0@3;\n").unwrap();
        let s = Strategy::empty(Player::Eve, 2);
        let err = restrict_by_strategy(&game, &s, Player::Eve).unwrap_err();
        assert!(matches!(err, Error::StrategyUndefined(0)));
    }

    #[test]
    fn winning_strategies_are_sound() {
        let game = parse_game(
            "paritygame 3 0 5 0;\n0 E: 1@1,2@0;\n1 A: 0@4,3@5;\n2 A: 2@3,0@2;\n3 E: 3@1,1@0;\n",
        )
        .unwrap();
        for r in [solve_zielonka(&game), solve_progress_measures(&game)] {
            check_solution(&game, &r).unwrap();
        }
    }

    #[test]
    fn losing_strategy_is_caught() {
        // Adam wins vertex 0; the only Eve choice is irrelevant.
        let game = parse_game("paritygame 1 0 3 0;\n0 A: 1@3;\n1 E: 0@0,1@3;\n").unwrap();
        let r = solve_zielonka(&game);
        assert_eq!(r.winner(0), Player::Adam);
        let mut s = Strategy::empty(Player::Eve, 2);
        s.set(1, 2);
        let g = restrict_by_strategy(&game, &s, Player::Eve).unwrap();
        let c = is_even_graph(&g);
        assert!(!c.even);
        assert_eq!(c.witness.unwrap().limsup(&g), Some(3));
    }
}
