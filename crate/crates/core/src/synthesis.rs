//! Index reduction by composition: the automaton of transduction-game
//! configurations, its product with a tree automaton, and the probe for a
//! sufficient counter bound.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{Player, Priority, PriorityIndex};
use crate::par;
use crate::reg::{solve_reg, RegSpec, RegState, ResetReading};
use crate::solve::Solver;
use crate::tree::{acceptance_game, membership_with, Provenance, RegularTree, Transition, TreeAutomaton};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node<S> {
    Live(S),
    Sink,
}

/// Outcomes of one register pick and escalation after observing `observed`:
/// the next state (or the sink on instant loss) and the output.
fn choices(spec: &RegSpec, s: &RegState, observed: Priority) -> Result<Vec<(Option<RegState>, Priority)>> {
    let mut out: Vec<(Option<RegState>, Priority)> = Vec::new();
    for &j in spec.registers() {
        let o = spec.output(s, j)?;
        let mut push = |x: (Option<RegState>, Priority)| {
            if !out.contains(&x) {
                out.push(x);
            }
        };
        if o.instant_loss {
            push((None, spec.sink_priority()));
            continue;
        }
        for chosen in spec.escalations(observed) {
            push((Some(spec.update(&o.state, j, observed, chosen)?), o.output));
        }
    }
    Ok(out)
}

type Moves<S> = Vec<(usize, Node<S>, Node<S>, [Priority; 2])>;

/// Reachable-only construction of an automaton whose states are `Node<S>`.
fn build<S, F>(
    init: S,
    alphabet: Vec<String>,
    index: PriorityIndex,
    cap: usize,
    name: impl Fn(&S) -> String,
    step: F,
) -> Result<TreeAutomaton>
where
    S: Clone + Eq + Hash + Send + Sync,
    F: Fn(&S) -> Result<Moves<S>> + Sync + Send,
{
    let sink_priority = index.lo() | 1;
    let letters = alphabet.len();
    let mut ids: HashMap<Node<S>, usize> = HashMap::from([(Node::Live(init.clone()), 0)]);
    let mut nodes = vec![Node::Live(init)];
    let mut transitions = Vec::new();
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let expanded = {
            let nodes = &nodes;
            par::map(&frontier, |&id| match &nodes[id] {
                Node::Live(s) => step(s),
                Node::Sink => Ok((0..letters)
                    .map(|a| (a, Node::Sink, Node::Sink, [sink_priority; 2]))
                    .collect()),
            })
        };
        let mut next = Vec::new();
        for (&from, moves) in frontier.iter().zip(expanded) {
            let mut seen = HashSet::new();
            for (letter, l, r, priorities) in moves? {
                let mut intern = |n: Node<S>| -> Result<usize> {
                    if let Some(&id) = ids.get(&n) {
                        return Ok(id);
                    }
                    let id = nodes.len();
                    if id >= cap {
                        return Err(Error::StateCap { cap });
                    }
                    ids.insert(n.clone(), id);
                    nodes.push(n);
                    next.push(id);
                    Ok(id)
                };
                let (left, right) = (intern(l)?, intern(r)?);
                let t = Transition { from, letter, left, right, priorities };
                if seen.insert(t) {
                    transitions.push(t);
                }
            }
        }
        frontier = next;
    }
    let names = nodes
        .iter()
        .map(|n| match n {
            Node::Live(s) => name(s),
            Node::Sink => "sink".to_string(),
        })
        .collect();
    TreeAutomaton::new(alphabet, names, 0, transitions, index)
}

/// The automaton over priority-labelled trees whose states are
/// configurations of `Reg{J}{N}` and whose priorities are its outputs.
///
/// Reading the priority at a node, Eve's register pick and escalation are
/// chosen independently for each direction.
pub fn build_config_automaton(spec: &RegSpec, cap: usize) -> Result<TreeAutomaton> {
    let input = spec.input();
    let alphabet = input.iter().map(|p| p.to_string()).collect();
    build(spec.initial_state(), alphabet, spec.game_index(), cap, |s| spec.describe(s), |s| {
        let mut moves = Vec::new();
        for (letter, i) in input.iter().enumerate() {
            let options = choices(spec, s, i)?;
            for (n0, w0) in &options {
                for (n1, w1) in &options {
                    moves.push((letter, lift(n0), lift(n1), [*w0, *w1]));
                }
            }
        }
        Ok(moves)
    })
}

fn lift<S: Clone>(n: &Option<S>) -> Node<S> {
    n.as_ref().map_or(Node::Sink, |s| Node::Live(s.clone()))
}

/// How the composition feeds priorities of A to the transduction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComposeMode {
    /// One round for Eve's choice of transition (observing `min(I)`) and
    /// one per direction, as in the transduction game over the acceptance game.
    #[default]
    AcceptanceGame,
    /// Only the per-direction rounds, as over the projected run.
    ProjectedRun,
}

impl std::str::FromStr for ComposeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "acceptance-game" => Ok(ComposeMode::AcceptanceGame),
            "projected-run" => Ok(ComposeMode::ProjectedRun),
            _ => Err(Error::Unsatisfiable(format!("unknown compose mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Composed {
    pub automaton: TreeAutomaton,
    pub provenance: Provenance,
}

/// `A ∘ C`: states pair a state of A with a configuration, priorities lie
/// in `J` (plus the sink priority when `J` has no odd priority).
pub fn compose(a: &TreeAutomaton, spec: &RegSpec, mode: ComposeMode, cap: usize) -> Result<Composed> {
    let (ai, si) = (a.index(), spec.input());
    if !(si.contains(ai.lo()) && si.contains(ai.hi())) {
        return Err(Error::IndexMismatch(format!(
            "automaton index {ai} is not within the input index {si}"
        )));
    }
    let first = ai.lo();
    let neutral = spec.neutral();
    let name = |(q, s): &(usize, RegState)| format!("{}|{}", a.states()[*q], spec.describe(s));
    let automaton = build((a.initial(), spec.initial_state()), a.alphabet().to_vec(), spec.game_index(), cap, name, |(q, s)| {
        let sink = spec.sink_priority();
        let mut moves = Vec::new();
        for letter in 0..a.alphabet().len() {
            let rounds = match mode {
                ComposeMode::AcceptanceGame => choices(spec, s, first)?,
                ComposeMode::ProjectedRun => vec![(Some(s.clone()), neutral)],
            };
            for &t in a.from(*q, letter) {
                let tr = a.transition(t);
                for (s1, w1) in &rounds {
                    let Some(s1) = s1 else {
                        moves.push((letter, Node::Sink, Node::Sink, [sink, sink]));
                        continue;
                    };
                    let per_dir: Vec<Vec<(Node<(usize, RegState)>, Priority)>> = (0..2)
                        .map(|d| {
                            Ok(choices(spec, s1, tr.priorities[d])?
                                .into_iter()
                                .map(|(s2, w2)| match s2 {
                                    Some(s2) => (Node::Live((tr.target(d), s2)), (*w1).max(w2)),
                                    None => (Node::Sink, sink),
                                })
                                .collect())
                        })
                        .collect::<Result<_>>()?;
                    for (l, p0) in &per_dir[0] {
                        for (r, p1) in &per_dir[1] {
                            moves.push((letter, l.clone(), r.clone(), [*p0, *p1]));
                        }
                    }
                }
            }
        }
        Ok(moves)
    })?;
    let provenance = Provenance {
        source_automaton_hash: a.content_hash(),
        j: spec.output_index(),
        n: spec.bound(),
        reset_reading: spec.reset(),
    };
    Ok(Composed { automaton, provenance })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub tree: usize,
    pub member: bool,
    /// Winner of the transduction game for `N = 0..=n_max`.
    pub eve_wins: Vec<bool>,
    pub agrees: Vec<bool>,
    /// Agreement never turns into disagreement as `N` grows.
    pub monotone: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    #[serde(rename = "J")]
    pub j: PriorityIndex,
    pub n_max: u32,
    pub rows: Vec<ProbeRow>,
    /// Least `N` at which every tree agrees.
    pub least_n: Option<u32>,
    /// `(tree, N)` where a rejected tree is won by Eve.
    pub fatal: Vec<(usize, u32)>,
    /// Trees whose agreement is not monotone in `N`.
    pub anomalies: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    pub reset: ResetReading,
    pub solver: Solver,
    pub cap: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { reset: ResetReading::default(), solver: Solver::default(), cap: crate::DEFAULT_STATE_CAP }
    }
}

/// Compares membership with the transduction game over the acceptance
/// game for every corpus tree and every `N ≤ n_max`.
pub fn probe_bound(
    a: &TreeAutomaton,
    j: PriorityIndex,
    corpus: &[RegularTree],
    n_max: u32,
    config: ProbeConfig,
) -> Result<ProbeReport> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let games = par::map(corpus, |t| acceptance_game(a, t))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let member = par::map(corpus, |t| membership_with(a, t, config.solver))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(usize, u32)> = (0..corpus.len()).flat_map(|t| (0..=n_max).map(move |n| (t, n))).collect();
    let wins = par::map(&tasks, |&(t, n)| -> Result<bool> {
        let spec = RegSpec::new(a.index(), j, n)?.with_reset(config.reset);
        Ok(solve_reg(&games[t].game, &spec, config.solver, config.cap)?.winner == Player::Eve)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let width = n_max as usize + 1;
    let mut rows = Vec::with_capacity(corpus.len());
    let mut fatal = Vec::new();
    for (t, chunk) in wins.chunks(width).enumerate() {
        let agrees: Vec<bool> = chunk.iter().map(|&w| w == member[t]).collect();
        for (n, &w) in chunk.iter().enumerate() {
            if w && !member[t] {
                fatal.push((t, n as u32));
            }
        }
        let monotone = agrees.windows(2).all(|w| !w[0] || w[1]);
        rows.push(ProbeRow { tree: t, member: member[t], eve_wins: chunk.to_vec(), agrees, monotone });
    }
    let least_n = (0..width).find(|&n| rows.iter().all(|r| r.agrees[n])).map(|n| n as u32);
    let anomalies = rows.iter().filter(|r| !r.monotone).map(|r| r.tree).collect();
    Ok(ProbeReport { j, n_max, rows, least_n, fatal, anomalies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{examples, is_empty, membership};

    fn idx(lo: u32, hi: u32) -> PriorityIndex {
        PriorityIndex::new(lo, hi).unwrap()
    }

    fn spec(i: (u32, u32), j: (u32, u32), n: u32) -> RegSpec {
        RegSpec::new(idx(i.0, i.1), idx(j.0, j.1), n).unwrap()
    }

    #[test]
    fn even_input_only() {
        let c = build_config_automaton(&spec((2, 2), (2, 3), 0), 1000).unwrap();
        assert_eq!(c.states().len(), 1);
        assert!(c.transitions().iter().all(|t| t.priorities == [2, 2]));
        let t = RegularTree::constant("2");
        assert!(membership(&c, &t).unwrap());
    }

    #[test]
    fn odd_input_only_is_empty() {
        let c = build_config_automaton(&spec((1, 1), (2, 3), 0), 1000).unwrap();
        assert!(is_empty(&c).empty);
    }

    #[test]
    fn compose_universal() {
        let a = examples::universal(&["a", "b"]);
        let b = compose(&a, &spec((2, 2), (2, 3), 0), ComposeMode::default(), 1000).unwrap();
        assert!(b.automaton.transitions().iter().all(|t| t.priorities.iter().all(|&p| idx(2, 3).contains(p))));
        assert!(membership(&b.automaton, &RegularTree::constant("a")).unwrap());
        assert_eq!(b.provenance.source_automaton_hash, a.content_hash());
    }

    #[test]
    fn compose_all_odd() {
        let a = examples::all_odd(&["a", "b"]);
        for mode in [ComposeMode::AcceptanceGame, ComposeMode::ProjectedRun] {
            let b = compose(&a, &spec((1, 1), (2, 3), 1), mode, 1000).unwrap();
            assert!(!membership(&b.automaton, &RegularTree::constant("b")).unwrap());
        }
    }

    #[test]
    fn compose_index_mismatch() {
        let a = examples::somewhere_a();
        assert!(matches!(
            compose(&a, &spec((2, 3), (2, 3), 0), ComposeMode::default(), 1000),
            Err(Error::IndexMismatch(_))
        ));
    }

    #[test]
    fn probe_universal() {
        let a = examples::universal(&["a", "b"]);
        let corpus = vec![RegularTree::constant("a"), RegularTree::constant("b")];
        let r = probe_bound(&a, idx(2, 3), &corpus, 2, ProbeConfig::default()).unwrap();
        assert_eq!(r.least_n, Some(0));
        assert!(r.fatal.is_empty());
    }

    #[test]
    fn probe_empty_corpus() {
        let a = examples::universal(&["a"]);
        assert!(matches!(probe_bound(&a, idx(2, 3), &[], 1, ProbeConfig::default()), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            build_config_automaton(&spec((1, 4), (2, 5), 3), 5),
            Err(Error::StateCap { cap: 5 })
        ));
    }
}
