//! Small automata used throughout the tests and docs.

use super::automaton::{Transition, TreeAutomaton};
use crate::index::{Priority, PriorityIndex};

fn single_state(alphabet: &[&str], p: Priority) -> TreeAutomaton {
    let transitions = (0..alphabet.len())
        .map(|a| Transition { from: 0, letter: a, left: 0, right: 0, priorities: [p, p] })
        .collect();
    TreeAutomaton::new(
        alphabet.iter().map(|s| s.to_string()).collect(),
        vec!["q".into()],
        0,
        transitions,
        PriorityIndex::new(p, p).expect("singleton"),
    )
    .expect("valid")
}

/// Accepts every tree: one state, all priorities 2.
pub fn universal(alphabet: &[&str]) -> TreeAutomaton {
    single_state(alphabet, 2)
}

/// Accepts nothing: one state, all priorities 1.
pub fn all_odd(alphabet: &[&str]) -> TreeAutomaton {
    single_state(alphabet, 1)
}

/// Trees over `{a, b}` with an `a` somewhere.
pub fn somewhere_a() -> TreeAutomaton {
    let t = |from, letter, left, right, p0, p1| Transition { from, letter, left, right, priorities: [p0, p1] };
    TreeAutomaton::new(
        vec!["a".into(), "b".into()],
        vec!["search".into(), "done".into()],
        0,
        vec![
            t(0, 0, 1, 1, 2, 2),
            t(0, 1, 0, 1, 1, 2),
            t(0, 1, 1, 0, 2, 1),
            t(1, 0, 1, 1, 2, 2),
            t(1, 1, 1, 1, 2, 2),
        ],
        PriorityIndex::new(1, 2).expect("valid"),
    )
    .expect("valid")
}
