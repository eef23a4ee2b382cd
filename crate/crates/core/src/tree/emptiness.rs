use std::collections::HashMap;

use super::automaton::{StateId, TransitionId, TreeAutomaton};
use super::regular::RegularTree;
use crate::explore::{explore, Explored};
use crate::index::Player;
use crate::solve::{solve, Solver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum EmptinessNode {
    State(StateId),
    Transition(TransitionId),
}

/// Result of the emptiness check with a regular witness when non-empty.
#[derive(Clone, Debug)]
pub struct Emptiness {
    pub empty: bool,
    pub witness: Option<RegularTree>,
}

/// Emptiness game: Eve picks any transition (and thereby the letter),
/// Adam picks the direction.
pub fn is_empty(a: &TreeAutomaton) -> Emptiness {
    let lo = a.index().lo();
    let init = EmptinessNode::State(a.initial());
    let Explored { game, nodes } = explore(init, a.index(), usize::MAX, |&n| {
        Ok(match n {
            EmptinessNode::State(q) => {
                let succ = (0..a.transitions().len())
                    .filter(|&t| a.transition(t).from == q)
                    .map(|t| (EmptinessNode::Transition(t), lo))
                    .collect();
                (Player::Eve, succ)
            }
            EmptinessNode::Transition(t) => {
                let tr = a.transition(t);
                let succ = (0..2)
                    .map(|d| (EmptinessNode::State(tr.target(d)), tr.priorities[d]))
                    .collect();
                (Player::Adam, succ)
            }
        })
    })
    .expect("automaton games are bounded by the automaton size");
    let result = solve(&game, Solver::default());
    if result.winner(0) == Player::Adam {
        return Emptiness { empty: true, witness: None };
    }
    let mut ids: HashMap<usize, usize> = HashMap::from([(0, 0)]);
    let mut order = vec![0usize];
    let mut labels = Vec::new();
    let mut succ = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        let e = result.eve_strategy.get(v).expect("Eve has a move at her winning vertices");
        let branch = game.edge(e).dst;
        let EmptinessNode::Transition(t) = nodes[branch] else {
            unreachable!("states lead to transitions");
        };
        labels.push(a.alphabet()[a.transition(t).letter].clone());
        let mut pair = [0; 2];
        for (d, slot) in pair.iter_mut().enumerate() {
            let child = game.edge(game.out(branch)[d]).dst;
            *slot = *ids.entry(child).or_insert_with(|| {
                order.push(child);
                order.len() - 1
            });
        }
        succ.push(pair);
        k += 1;
    }
    let witness = RegularTree::new(labels, succ, 0).expect("witness is well formed");
    Emptiness { empty: false, witness: Some(witness) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{examples, membership};

    #[test]
    fn all_odd_is_empty() {
        assert!(is_empty(&examples::all_odd(&["a", "b"])).empty);
    }

    #[test]
    fn all_even_single_letter() {
        let e = is_empty(&examples::universal(&["a"]));
        assert!(!e.empty);
        assert!(e.witness.unwrap().same_tree(&RegularTree::constant("a")));
    }

    #[test]
    fn somewhere_a_witness() {
        let a = examples::somewhere_a();
        let e = is_empty(&a);
        let w = e.witness.unwrap();
        assert!(w.labels.iter().any(|l| l == "a"));
        assert!(membership(&a, &w).unwrap());
    }
}
