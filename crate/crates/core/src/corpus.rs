//! Seeded generators for games, automata, regular trees and guided pairs.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Edge, ParityGame, ParityGraph};
use crate::guidance::GuidingFunction;
use crate::index::{Player, Priority, PriorityIndex};
use crate::tree::{is_empty, membership, RegularTree, Transition, TreeAutomaton};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub seed: u64,
    /// Upper bound on vertices, states or nodes.
    pub size: usize,
    pub index: PriorityIndex,
    /// Upper bound on out-degree, or on transitions per state and letter.
    pub branching: usize,
    pub letters: usize,
}

impl GenSpec {
    pub fn new(seed: u64, size: usize) -> Self {
        GenSpec {
            seed,
            size,
            index: PriorityIndex::new(0, 6).expect("valid"),
            branching: 3,
            letters: 2,
        }
    }

    pub fn with_index(mut self, index: PriorityIndex) -> Self {
        self.index = index;
        self
    }

    pub fn with_branching(mut self, branching: usize) -> Self {
        self.branching = branching;
        self
    }

    pub fn with_letters(mut self, letters: usize) -> Self {
        self.letters = letters;
        self
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn check(&self) -> Result<()> {
        if self.size == 0 || self.branching == 0 || self.letters == 0 {
            return Err(Error::Unsatisfiable("size, branching and letters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn of(p: Priority) -> Parity {
        if p.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(Error::Unsatisfiable(format!("unknown parity `{s}`"))),
        }
    }
}

/// `a`, `b`, ..., `z`, `a1`, ...
pub fn letter_name(i: usize) -> String {
    let c = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        c.to_string()
    } else {
        format!("{c}{}", i / 26)
    }
}

fn priority(rng: &mut impl Rng, index: PriorityIndex) -> Priority {
    rng.random_range(index.lo()..=index.hi())
}

fn random_edges(rng: &mut impl Rng, n: usize, spec: &GenSpec) -> Vec<Edge> {
    let mut edges = Vec::new();
    for src in 0..n {
        for _ in 0..rng.random_range(1..=spec.branching) {
            edges.push(Edge { src, dst: rng.random_range(0..n), priority: priority(rng, spec.index) });
        }
    }
    edges
}

/// A random game with at most `size` vertices, each with 1 to `branching` moves.
pub fn gen_game(spec: &GenSpec) -> Result<ParityGame> {
    spec.check()?;
    let mut rng = spec.rng();
    let n = rng.random_range(1..=spec.size);
    let owners = (0..n).map(|_| if rng.random_bool(0.5) { Player::Eve } else { Player::Adam }).collect();
    let edges = random_edges(&mut rng, n, spec);
    ParityGame::new(owners, edges, spec.index, 0)
}

/// A random Adam-only game.
pub fn gen_adam_graph(spec: &GenSpec) -> Result<ParityGame> {
    spec.check()?;
    let mut rng = spec.rng();
    let n = rng.random_range(1..=spec.size);
    let edges = random_edges(&mut rng, n, spec);
    ParityGame::adam_only(ParityGraph::new(n, edges, 0)?, spec.index)
}

/// A single lasso (prefix then cycle) whose cycle maximum has the requested parity.
pub fn gen_lasso(spec: &GenSpec, parity: Parity) -> Result<ParityGame> {
    spec.check()?;
    let tops: Vec<Priority> = spec.index.iter().filter(|&p| Parity::of(p) == parity).collect();
    if tops.is_empty() {
        return Err(Error::Unsatisfiable(format!("index {} has no {parity:?} priority", spec.index)));
    }
    let mut rng = spec.rng();
    let n = rng.random_range(1..=spec.size);
    let prefix = rng.random_range(0..n);
    let top = tops[rng.random_range(0..tops.len())];
    let peak = rng.random_range(prefix..n);
    let mut edges = Vec::with_capacity(n);
    for src in 0..n {
        let dst = if src + 1 < n { src + 1 } else { prefix };
        let priority = if src == peak {
            top
        } else if src < prefix {
            priority(&mut rng, spec.index)
        } else {
            rng.random_range(spec.index.lo()..=top)
        };
        edges.push(Edge { src, dst, priority });
    }
    ParityGame::adam_only(ParityGraph::new(n, edges, 0)?, spec.index)
}

fn alphabet(k: usize) -> Vec<String> {
    (0..k).map(letter_name).collect()
}

fn random_transitions(
    rng: &mut impl Rng,
    states: usize,
    targets: usize,
    letters: usize,
    branching: usize,
    index: PriorityIndex,
) -> Vec<Transition> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for from in 0..states {
        for letter in 0..letters {
            for _ in 0..rng.random_range(1..=branching) {
                let t = Transition {
                    from,
                    letter,
                    left: rng.random_range(0..targets),
                    right: rng.random_range(0..targets),
                    priorities: [priority(rng, index), priority(rng, index)],
                };
                // At most one priority pair per (from, letter, left, right), so
                // guide files can name every transition.
                if seen.insert((t.from, t.letter, t.left, t.right)) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// A random complete automaton with states `q0, q1, ...`.
pub fn gen_automaton(spec: &GenSpec) -> Result<TreeAutomaton> {
    spec.check()?;
    let mut rng = spec.rng();
    let n = rng.random_range(1..=spec.size);
    let t = random_transitions(&mut rng, n, n, spec.letters, spec.branching, spec.index);
    TreeAutomaton::new(alphabet(spec.letters), (0..n).map(|q| format!("q{q}")).collect(), 0, t, spec.index)
}

/// A random regular tree over the first `letters` letters.
pub fn gen_tree(spec: &GenSpec) -> Result<RegularTree> {
    gen_tree_over(spec, &alphabet(spec.letters))
}

/// A random regular tree over `labels`, pruned to its reachable part.
pub fn gen_tree_over(spec: &GenSpec, labels: &[String]) -> Result<RegularTree> {
    spec.check()?;
    if labels.is_empty() {
        return Err(Error::Unsatisfiable("no labels to draw from".into()));
    }
    let mut rng = spec.rng();
    random_tree(&mut rng, spec.size, labels)
}

fn random_tree(rng: &mut impl Rng, size: usize, labels: &[String]) -> Result<RegularTree> {
    let n = rng.random_range(1..=size);
    let l = (0..n).map(|_| labels[rng.random_range(0..labels.len())].clone()).collect();
    let succ = (0..n).map(|_| [rng.random_range(0..n), rng.random_range(0..n)]).collect();
    Ok(RegularTree::new(l, succ, 0)?.pruned())
}

/// A guided pair `(A, B, g)` and a corpus of trees accepted by B.
#[derive(Clone, Debug)]
pub struct GuidedPair {
    pub a: TreeAutomaton,
    pub b: TreeAutomaton,
    pub g: GuidingFunction,
    pub corpus: Vec<RegularTree>,
}

const PAIR_INDICES: [(Priority, Priority); 3] = [(1, 2), (2, 3), (1, 3)];
const ATTEMPTS: usize = 1000;

/// Draws a non-empty B with at most `max_states` states until one is found.
fn nonempty_b(rng: &mut impl Rng, max_states: usize, deterministic: bool) -> Result<(TreeAutomaton, RegularTree)> {
    let letters = 2;
    for _ in 0..ATTEMPTS {
        let (lo, hi) = PAIR_INDICES[rng.random_range(0..PAIR_INDICES.len())];
        let j = PriorityIndex::new(lo, hi)?;
        let n = rng.random_range(1..=max_states);
        let branching = if deterministic { 1 } else { 2 };
        let t = random_transitions(rng, n, n, letters, branching, j);
        let b = TreeAutomaton::new(alphabet(letters), (0..n).map(|q| format!("p{q}")).collect(), 0, t, j)?;
        if let Some(w) = is_empty(&b).witness {
            return Ok((b, w));
        }
    }
    Err(Error::Unsatisfiable("no non-empty automaton found".into()))
}

/// A copies B's states and transitions through `f`, then adds `extra`
/// random states; g sends every B-transition to its copy.
fn copy_with(
    rng: &mut impl Rng,
    b: &TreeAutomaton,
    f: impl Fn(Priority) -> Priority,
    extra: usize,
) -> Result<(TreeAutomaton, GuidingFunction)> {
    let qb = b.states().len();
    let letters = b.alphabet().len();
    let index = PriorityIndex::new(f(b.index().lo()), f(b.index().hi()))?;
    let mut states: Vec<String> = b.states().iter().map(|s| format!("{s}'")).collect();
    states.extend((0..extra).map(|k| format!("x{k}")));
    let mut transitions: Vec<Transition> = b
        .transitions()
        .iter()
        .map(|t| Transition { priorities: t.priorities.map(&f), ..*t })
        .collect();
    let mut more = random_transitions(rng, extra, qb + extra, letters, 2, index);
    for t in &mut more {
        t.from += qb;
    }
    transitions.extend(more);
    let a = TreeAutomaton::new(b.alphabet().to_vec(), states, b.initial(), transitions, index)?;
    let mut table = Vec::new();
    for p in 0..a.states().len() {
        for (tb, t) in b.transitions().iter().enumerate() {
            let ta = if p == t.from { tb } else { a.from(p, t.letter)[0] };
            table.push(((p, tb), ta));
        }
    }
    let g = GuidingFunction::new(&a, b, table)?;
    Ok((a, g))
}

fn accepted_corpus(rng: &mut impl Rng, b: &TreeAutomaton, witness: RegularTree, size: usize) -> Result<Vec<RegularTree>> {
    let mut corpus = vec![witness];
    for _ in 0..6 * size {
        if corpus.len() > size {
            break;
        }
        let t = random_tree(rng, 4, b.alphabet())?;
        if membership(b, &t)? && !corpus.iter().any(|c| c.same_tree(&t)) {
            corpus.push(t);
        }
    }
    Ok(corpus)
}

/// A pair where A is B with priorities renamed by a strictly increasing,
/// parity-preserving map, so g preserves acceptance on every tree.
/// `|Q_A| · |Q_B| ≤ 6`, `|Q_B| ≤ 2`. The corpus holds B's emptiness
/// witness and up to `spec.size` further random trees accepted by B.
pub fn gen_guided_pair(spec: &GenSpec) -> Result<GuidedPair> {
    spec.check()?;
    let mut rng = spec.rng();
    let (b, witness) = nonempty_b(&mut rng, 2, false)?;
    let qb = b.states().len();
    let j = b.index();
    let mut image = vec![j.lo() + 2 * rng.random_range(0..=1)];
    for _ in j.lo()..j.hi() {
        let last = *image.last().expect("non-empty");
        image.push(last + 1 + 2 * rng.random_range(0..=1));
    }
    let f = |p: Priority| image[(p - j.lo()) as usize];
    let extra = rng.random_range(0..=(6 / qb - qb).min(2));
    let (a, g) = copy_with(&mut rng, &b, f, extra)?;
    let corpus = accepted_corpus(&mut rng, &b, witness, spec.size)?;
    Ok(GuidedPair { a, b, g, corpus })
}

/// A pair that breaks preservation: B is deterministic and A is its copy
/// with every priority raised by one, so g maps accepting runs of B to
/// rejecting runs of A.
pub fn violating_pair(seed: u64) -> Result<GuidedPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (b, witness) = nonempty_b(&mut rng, 2, true)?;
    let (a, g) = copy_with(&mut rng, &b, |p| p + 1, 0)?;
    let corpus = accepted_corpus(&mut rng, &b, witness, 2)?;
    Ok(GuidedPair { a, b, g, corpus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::even::is_even_graph;
    use crate::format::write_game;

    #[test]
    fn seed_one_lasso_is_odd() {
        let spec = GenSpec::new(1, 8).with_index(PriorityIndex::new(0, 4).unwrap());
        let g = gen_lasso(&spec, Parity::Odd).unwrap();
        let check = is_even_graph(g.graph());
        assert!(!check.even);
        assert!(check.witness.is_some());
    }

    #[test]
    fn seed_one_game_round_trips() {
        let g = gen_game(&GenSpec::new(1, 20)).unwrap();
        let text = write_game(&g);
        assert_eq!(write_game(&crate::format::parse_game(&text).unwrap()), text);
    }

    #[test]
    fn seed_one_pair_is_compatible() {
        let p = gen_guided_pair(&GenSpec::new(1, 3)).unwrap();
        assert!(p.g.missing(&p.a, &p.b).is_empty());
        assert!(p.a.states().len() * p.b.states().len() <= 6);
        for t in &p.corpus {
            assert!(membership(&p.b, t).unwrap());
        }
    }

    #[test]
    fn unsatisfiable_bounds() {
        assert!(gen_game(&GenSpec::new(1, 0)).is_err());
        let spec = GenSpec::new(1, 4).with_index(PriorityIndex::new(2, 2).unwrap());
        assert!(gen_lasso(&spec, Parity::Odd).is_err());
    }

    #[test]
    fn letters() {
        assert_eq!(letter_name(0), "a");
        assert_eq!(letter_name(27), "b1");
    }
}
