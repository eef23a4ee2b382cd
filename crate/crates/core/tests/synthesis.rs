use paritylab::corpus::{gen_automaton, gen_tree, gen_tree_over, GenSpec};
use paritylab::reg::{solve_reg, RegSpec, ResetReading};
use paritylab::solve::Solver;
use paritylab::synthesis::{build_config_automaton, compose, probe_bound, ComposeMode, ProbeConfig};
use paritylab::tree::{membership, RegularTree};
use paritylab::{Edge, ParityGame, ParityGraph, Player, PriorityIndex, DEFAULT_STATE_CAP};
use proptest::prelude::*;

fn idx(lo: u32, hi: u32) -> PriorityIndex {
    PriorityIndex::new(lo, hi).unwrap()
}

/// A priority-labelled tree as an Adam-only game: both edges leaving a
/// node carry its label.
fn as_game(t: &RegularTree, index: PriorityIndex) -> ParityGame {
    let mut edges = Vec::new();
    for n in 0..t.len() {
        let p: u32 = t.labels[n].parse().unwrap();
        for d in 0..2 {
            edges.push(Edge { src: n, dst: t.succ[n][d], priority: p });
        }
    }
    ParityGame::adam_only(ParityGraph::new(t.len(), edges, t.root).unwrap(), index).unwrap()
}

#[test]
fn config_automaton_matches_game_on_priority_trees() {
    let spec = RegSpec::new(idx(1, 2), idx(2, 3), 1).unwrap();
    let c = build_config_automaton(&spec, DEFAULT_STATE_CAP).unwrap();
    let labels = vec!["1".to_string(), "2".to_string()];
    let mut accepted = 0;
    for seed in 0..120 {
        let t = gen_tree_over(&GenSpec::new(seed, 8), &labels).unwrap();
        let game = solve_reg(&as_game(&t, spec.input()), &spec, Solver::default(), DEFAULT_STATE_CAP).unwrap();
        let member = membership(&c, &t).unwrap();
        assert_eq!(member, game.winner == Player::Eve, "seed {seed}");
        accepted += usize::from(member);
    }
    assert!(accepted > 0 && accepted < 120);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn config_priorities_lie_in_j(lo in 0u32..3, width in 0u32..3, j in 0usize..3, n in 0u32..3, post in any::<bool>()) {
        let (jlo, jhi) = [(1, 2), (2, 3), (1, 4)][j];
        let reset = if post { ResetReading::Post } else { ResetReading::Pre };
        let spec = RegSpec::new(idx(lo, lo + width), idx(jlo, jhi), n).unwrap().with_reset(reset);
        let c = build_config_automaton(&spec, DEFAULT_STATE_CAP).unwrap();
        for t in c.transitions() {
            for p in t.priorities {
                prop_assert!(idx(jlo, jhi).contains(p));
            }
        }
    }

    #[test]
    fn rejected_trees_stay_rejected(seed in any::<u64>(), j in 0usize..2, n in 0u32..3, projected in any::<bool>()) {
        let a = gen_automaton(&GenSpec::new(seed, 3).with_index(idx(1, 3)).with_branching(2)).unwrap();
        let t = gen_tree(&GenSpec::new(seed.wrapping_add(1), 5)).unwrap();
        prop_assume!(!membership(&a, &t).unwrap());
        let (jlo, jhi) = [(1, 2), (2, 3)][j];
        let spec = RegSpec::new(a.index(), idx(jlo, jhi), n).unwrap();
        let mode = if projected { ComposeMode::ProjectedRun } else { ComposeMode::AcceptanceGame };
        let b = compose(&a, &spec, mode, DEFAULT_STATE_CAP).unwrap();
        prop_assert!(!membership(&b.automaton, &t).unwrap());
    }

    #[test]
    fn composed_round_trips_with_provenance(seed in any::<u64>()) {
        let a = gen_automaton(&GenSpec::new(seed, 2).with_index(idx(1, 2))).unwrap();
        let spec = RegSpec::new(a.index(), idx(2, 3), 1).unwrap();
        let b = compose(&a, &spec, ComposeMode::default(), DEFAULT_STATE_CAP).unwrap();
        let text = b.automaton.to_json_with_provenance(b.provenance.clone());
        let (back, prov) = paritylab::tree::TreeAutomaton::from_json_with_provenance(&text).unwrap();
        prop_assert_eq!(back, b.automaton);
        prop_assert_eq!(prov, Some(b.provenance));
    }
}

#[test]
fn probe_flags_nothing_on_rejected_trees() {
    let a = gen_automaton(&GenSpec::new(5, 3).with_index(idx(1, 2)).with_branching(2)).unwrap();
    let corpus: Vec<RegularTree> = (0..6).map(|s| gen_tree(&GenSpec::new(s, 4)).unwrap()).collect();
    let r = probe_bound(&a, idx(1, 2), &corpus, 3, ProbeConfig::default()).unwrap();
    assert!(r.fatal.is_empty());
    for row in r.rows.iter().filter(|r| !r.member) {
        assert!(row.agrees.iter().all(|&x| x));
    }
}
