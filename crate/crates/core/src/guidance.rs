//! Guiding functions: resolving the nondeterminism of one automaton with
//! the runs of another, plus the checks built on top of that.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::even::is_even_graph;
use crate::game::{EdgeId, Play};
use crate::index::{Priority, PriorityIndex};
use crate::par;
use crate::reg::{expand_reg_restricted, RegConfig, RegPolicy, RegSpec};
use crate::solve::{solve, Solver};
use crate::tree::{
    acceptance_game, project_priorities, projected_game, run_game, Dir, RegularRun, RegularTree, RunNode, StateId,
    TransitionId, TreeAutomaton,
};
use crate::index::Player;

/// One line of a guide file. Applies to every transition of B matching
/// `(from, letter, left_b, right_b)`, whatever its priorities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GuideEntry {
    pub state: String,
    pub from: String,
    pub letter: String,
    pub left_b: String,
    pub right_b: String,
    pub to_left: String,
    pub to_right: String,
}

/// `g(p, δ_B) = δ_A`, with `δ_A` leaving `p` over the letter of `δ_B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuidingFunction {
    table: BTreeMap<(StateId, TransitionId), TransitionId>,
}

impl GuidingFunction {
    /// Builds a table, checking compatibility of every entry.
    pub fn new(
        a: &TreeAutomaton,
        b: &TreeAutomaton,
        table: impl IntoIterator<Item = ((StateId, TransitionId), TransitionId)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((p, tb), ta) in table {
            check_compatible(a, b, p, tb, ta)?;
            if let Some(old) = map.insert((p, tb), ta) {
                if old != ta {
                    return Err(Error::Guidance(format!(
                        "conflicting entries for state `{}` and {}",
                        a.states()[p],
                        b.describe_transition(tb)
                    )));
                }
            }
        }
        Ok(GuidingFunction { table: map })
    }

    /// `A = B`: every transition guides itself; other states take their
    /// first compatible transition.
    pub fn identity(a: &TreeAutomaton) -> Self {
        let mut table = BTreeMap::new();
        for p in 0..a.states().len() {
            for (tb, t) in a.transitions().iter().enumerate() {
                let ta = if t.from == p { tb } else { a.from(p, t.letter)[0] };
                table.insert((p, tb), ta);
            }
        }
        GuidingFunction { table }
    }

    pub fn get(&self, p: StateId, tb: TransitionId) -> Option<TransitionId> {
        self.table.get(&(p, tb)).copied()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Pairs of `Q_A × Δ_B` without an entry.
    pub fn missing(&self, a: &TreeAutomaton, b: &TreeAutomaton) -> Vec<(StateId, TransitionId)> {
        (0..a.states().len())
            .flat_map(|p| (0..b.transitions().len()).map(move |t| (p, t)))
            .filter(|k| !self.table.contains_key(k))
            .collect()
    }

    pub fn from_entries(a: &TreeAutomaton, b: &TreeAutomaton, entries: &[GuideEntry]) -> Result<Self> {
        let mut table = Vec::new();
        for e in entries {
            let state = |aut: &TreeAutomaton, s: &str, side: &str| {
                aut.state_id(s)
                    .ok_or_else(|| Error::Guidance(format!("unknown state `{s}` of {side}")))
            };
            let letter = |aut: &TreeAutomaton, side: &str| {
                aut.letter_id(&e.letter)
                    .ok_or_else(|| Error::Guidance(format!("unknown letter `{}` of {side}", e.letter)))
            };
            let p = state(a, &e.state, "A")?;
            let matching_b = b.find(
                state(b, &e.from, "B")?,
                letter(b, "B")?,
                state(b, &e.left_b, "B")?,
                state(b, &e.right_b, "B")?,
            );
            if matching_b.is_empty() {
                return Err(Error::Guidance(format!(
                    "no transition ({}, {}, {}, {}) in B",
                    e.from, e.letter, e.left_b, e.right_b
                )));
            }
            let matching_a = a.find(p, letter(a, "A")?, state(a, &e.to_left, "A")?, state(a, &e.to_right, "A")?);
            let ta = match matching_a.as_slice() {
                [one] => *one,
                [] => {
                    return Err(Error::Guidance(format!(
                        "no transition ({}, {}, {}, {}) in A",
                        e.state, e.letter, e.to_left, e.to_right
                    )))
                }
                _ => {
                    return Err(Error::Guidance(format!(
                        "transition ({}, {}, {}, {}) of A is ambiguous: it occurs with several priority pairs",
                        e.state, e.letter, e.to_left, e.to_right
                    )))
                }
            };
            table.extend(matching_b.into_iter().map(|tb| ((p, tb), ta)));
        }
        GuidingFunction::new(a, b, table)
    }

    /// One entry per table key, sorted by A-state then B-transition.
    pub fn to_entries(&self, a: &TreeAutomaton, b: &TreeAutomaton) -> Vec<GuideEntry> {
        self.table
            .iter()
            .map(|(&(p, tb), &ta)| {
                let (x, y) = (b.transition(tb), a.transition(ta));
                GuideEntry {
                    state: a.states()[p].clone(),
                    from: b.states()[x.from].clone(),
                    letter: b.alphabet()[x.letter].clone(),
                    left_b: b.states()[x.left].clone(),
                    right_b: b.states()[x.right].clone(),
                    to_left: a.states()[y.left].clone(),
                    to_right: a.states()[y.right].clone(),
                }
            })
            .collect()
    }

    pub fn to_json(&self, a: &TreeAutomaton, b: &TreeAutomaton) -> String {
        let mut entries = self.to_entries(a, b);
        // B-transitions differing only in priorities collapse to one line.
        entries.dedup();
        serde_json::to_string_pretty(&entries).expect("serializable") + "\n"
    }

    pub fn from_json(a: &TreeAutomaton, b: &TreeAutomaton, text: &str) -> Result<Self> {
        let entries: Vec<GuideEntry> = serde_json::from_str(text)?;
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e) {
                return Err(Error::Guidance(format!(
                    "duplicate entry for state `{}` and ({}, {}, {}, {})",
                    e.state, e.from, e.letter, e.left_b, e.right_b
                )));
            }
        }
        Self::from_entries(a, b, &entries)
    }
}

fn check_compatible(a: &TreeAutomaton, b: &TreeAutomaton, p: StateId, tb: TransitionId, ta: TransitionId) -> Result<()> {
    let (x, y) = (b.transition(tb), a.transition(ta));
    if y.from != p || a.alphabet()[y.letter] != b.alphabet()[x.letter] {
        return Err(Error::Guidance(format!(
            "g(`{}`, {}) = {} is not compatible with the state and letter",
            a.states()[p],
            b.describe_transition(tb),
            a.describe_transition(ta)
        )));
    }
    Ok(())
}

/// A run of A together with the B-run node behind each of its nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuidedRun {
    pub run: RegularRun,
    pub pairing: Vec<usize>,
}

/// The run `g(ρ_B)`, built over reachable pairs `(ρ_B node, A-state)`.
pub fn guide_run(a: &TreeAutomaton, b: &TreeAutomaton, g: &GuidingFunction, rho_b: &RegularRun) -> Result<GuidedRun> {
    let mut ids: HashMap<(usize, StateId), usize> = HashMap::new();
    let start = (rho_b.root, a.initial());
    let mut order = vec![start];
    ids.insert(start, 0);
    let mut nodes = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let (x, p) = order[k];
        let bn = &rho_b.nodes[x];
        let ta = g.get(p, bn.transition).ok_or_else(|| {
            Error::Guidance(format!(
                "g is undefined at state `{}` and {}",
                a.states()[p],
                b.describe_transition(bn.transition)
            ))
        })?;
        check_compatible(a, b, p, bn.transition, ta)?;
        let tr = a.transition(ta);
        let mut succ = [0; 2];
        for (d, slot) in succ.iter_mut().enumerate() {
            let key = (bn.succ[d], tr.target(d));
            *slot = *ids.entry(key).or_insert_with(|| {
                order.push(key);
                order.len() - 1
            });
        }
        nodes.push(RunNode { tree_node: bn.tree_node, transition: ta, succ });
        k += 1;
    }
    let pairing = order.iter().map(|&(x, _)| x).collect();
    Ok(GuidedRun { run: RegularRun { nodes, root: 0 }, pairing })
}

/// An accepting run of B over a tree and the run of A it guides.
#[derive(Clone, Debug)]
pub struct GuidedInstance {
    pub rho_b: RegularRun,
    pub guided: GuidedRun,
}

/// Computes an accepting run of B over `t` from a winning strategy, then
/// guides A with it. `None` when B rejects `t`.
pub fn guide_tree(
    a: &TreeAutomaton,
    b: &TreeAutomaton,
    g: &GuidingFunction,
    t: &RegularTree,
) -> Result<Option<GuidedInstance>> {
    let ag = acceptance_game(b, t)?;
    let result = solve(&ag.game, Solver::default());
    if result.winner(ag.game.initial()) != Player::Eve {
        return Ok(None);
    }
    let rho_b = run_game(b, &ag, &result.eve_strategy)?;
    let guided = guide_run(a, b, g, &rho_b)?;
    Ok(Some(GuidedInstance { rho_b, guided }))
}

/// One step of a lasso: from run node `from` in direction `dir`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub from: usize,
    pub dir: Dir,
    pub priority: Priority,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lasso {
    pub prefix: Vec<Step>,
    pub cycle: Vec<Step>,
}

impl Lasso {
    /// Reads a play on a projected run graph, where edge `2x + d` leaves `x` in direction `d`.
    pub fn from_play(play: &Play, priority: impl Fn(usize, Dir) -> Priority) -> Self {
        let step = |&e: &EdgeId| {
            let (from, dir) = (e / 2, (e % 2) as Dir);
            Step { from, dir, priority: priority(from, dir) }
        };
        Lasso {
            prefix: play.prefix.iter().map(step).collect(),
            cycle: play.cycle.iter().map(step).collect(),
        }
    }

    pub fn cycle_max(&self) -> Option<Priority> {
        self.cycle.iter().map(|s| s.priority).max()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationCase {
    pub tree: usize,
    pub run_a_nodes: usize,
    pub run_b_nodes: usize,
    pub preserved: bool,
    /// An odd-dominated branch of the guided run when not preserved.
    pub witness: Option<Lasso>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationReport {
    pub holds: bool,
    pub cases: Vec<PreservationCase>,
}

/// Checks that guided runs are accepting on every tree of the corpus.
pub fn check_preservation(
    a: &TreeAutomaton,
    b: &TreeAutomaton,
    g: &GuidingFunction,
    corpus: &[RegularTree],
) -> Result<PreservationReport> {
    let indexed: Vec<(usize, &RegularTree)> = corpus.iter().enumerate().collect();
    let cases = par::map(&indexed, |&(k, t)| -> Result<PreservationCase> {
        let inst = guide_tree(a, b, g, t)?.ok_or(Error::NotAccepted(k))?;
        let run = &inst.guided.run;
        let check = is_even_graph(&project_priorities(a, run));
        let witness = check.witness.map(|play| {
            Lasso::from_play(&play, |x, d| a.transition(run.nodes[x].transition).priorities[d as usize])
        });
        Ok(PreservationCase {
            tree: k,
            run_a_nodes: run.len(),
            run_b_nodes: inst.rho_b.len(),
            preserved: check.even,
            witness,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let holds = cases.iter().all(|c| c.preserved);
    Ok(PreservationReport { holds, cases })
}

/// A repeating segment `u → u·v` of the synchronized product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    /// Run node of A at `u` and at `u·v`.
    pub start: usize,
    pub end: usize,
    pub u: Vec<Dir>,
    pub v: Vec<Dir>,
    pub max_a: Priority,
    pub max_b: Priority,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PumpReport {
    /// Distinct `(start, end, max_a, max_b)` classes of repeating segments.
    pub segments: usize,
    /// At most one violating segment per start node.
    pub violations: Vec<Segment>,
}

fn check_pairing(
    a: &TreeAutomaton,
    g: &GuidingFunction,
    rho_a: &RegularRun,
    rho_b: &RegularRun,
    pairing: &[usize],
) -> Result<()> {
    if pairing.len() != rho_a.len() || pairing.iter().any(|&y| y >= rho_b.len()) {
        return Err(Error::Guidance("pairing does not cover the run of A".into()));
    }
    if pairing[rho_a.root] != rho_b.root {
        return Err(Error::Guidance("pairing does not match the roots".into()));
    }
    for (x, node) in rho_a.nodes.iter().enumerate() {
        let y = &rho_b.nodes[pairing[x]];
        let p = a.transition(node.transition).from;
        if g.get(p, y.transition) != Some(node.transition) || node.tree_node != y.tree_node {
            return Err(Error::Guidance(format!("run node {x} does not follow the guiding function")));
        }
        for d in 0..2 {
            if pairing[node.succ[d]] != y.succ[d] {
                return Err(Error::Guidance(format!("successor {d} of run node {x} is paired inconsistently")));
            }
        }
    }
    Ok(())
}

/// Shortest direction sequence from the root of `r` to every node.
fn paths_from_root(r: &RegularRun) -> Vec<Vec<Dir>> {
    let mut paths: Vec<Option<Vec<Dir>>> = vec![None; r.len()];
    paths[r.root] = Some(Vec::new());
    let mut queue = VecDeque::from([r.root]);
    while let Some(x) = queue.pop_front() {
        for d in 0..2 {
            let y = r.nodes[x].succ[d];
            if paths[y].is_none() {
                let mut p = paths[x].clone().expect("visited");
                p.push(d as Dir);
                paths[y] = Some(p);
                queue.push_back(y);
            }
        }
    }
    paths.into_iter().map(|p| p.expect("runs are rooted graphs")).collect()
}

/// Searches every segment between two positions of the guided product
/// with the same pair of A- and B-transitions, for one whose B-maximum is
/// even while its A-maximum is odd.
///
/// The search runs over `(node, max_a, max_b)` triples, so it covers all
/// finite segments, not only simple ones.
pub fn pump_check(
    a: &TreeAutomaton,
    b: &TreeAutomaton,
    g: &GuidingFunction,
    rho_a: &RegularRun,
    rho_b: &RegularRun,
    pairing: &[usize],
) -> Result<PumpReport> {
    check_pairing(a, g, rho_a, rho_b, pairing)?;
    let prio = |x: usize, d: usize| {
        (
            a.transition(rho_a.nodes[x].transition).priorities[d],
            b.transition(rho_b.nodes[pairing[x]].transition).priorities[d],
        )
    };
    let label = |x: usize| (rho_a.nodes[x].transition, rho_b.nodes[pairing[x]].transition);
    let roots = paths_from_root(rho_a);
    let starts: Vec<usize> = (0..rho_a.len()).collect();
    let per_start = par::map(&starts, |&x| {
        type Key = (usize, Priority, Priority);
        let mut parent: HashMap<Key, Option<(Key, Dir)>> = HashMap::new();
        let mut queue = VecDeque::new();
        for d in 0..2 {
            let (pa, pb) = prio(x, d);
            let key = (rho_a.nodes[x].succ[d], pa, pb);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(key) {
                e.insert(None);
                queue.push_back((key, d as Dir));
            }
        }
        let mut segments = 0;
        let mut violation = None;
        while let Some(((y, ma, mb), _)) = queue.pop_front() {
            if label(y) == label(x) {
                segments += 1;
                if violation.is_none() && mb % 2 == 0 && ma % 2 == 1 {
                    let mut v = Vec::new();
                    let mut cur = (y, ma, mb);
                    loop {
                        match parent[&cur] {
                            Some((prev, d)) => {
                                v.push(d);
                                cur = prev;
                            }
                            None => {
                                let first = (0..2)
                                    .find(|&d| {
                                        let (pa, pb) = prio(x, d);
                                        (rho_a.nodes[x].succ[d], pa, pb) == cur
                                    })
                                    .expect("first step leaves the start");
                                v.push(first as Dir);
                                break;
                            }
                        }
                    }
                    v.reverse();
                    violation = Some(Segment { start: x, end: y, u: roots[x].clone(), v, max_a: ma, max_b: mb });
                }
            }
            for d in 0..2 {
                let (pa, pb) = prio(y, d);
                let key = (rho_a.nodes[y].succ[d], ma.max(pa), mb.max(pb));
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(key) {
                    e.insert(Some(((y, ma, mb), d as Dir)));
                    queue.push_back((key, d as Dir));
                }
            }
        }
        (segments, violation)
    });
    let mut report = PumpReport { segments: 0, violations: Vec::new() };
    for (n, v) in per_start {
        report.segments += n;
        report.violations.extend(v);
    }
    Ok(report)
}

/// The tree in which the subtree at `u·v` is replaced by the subtree at
/// `u`, recursively: the path `u·v` is unfolded into fresh nodes and the
/// last edge of `v` is bent back to the copy at `u`.
pub fn pump_tree(t: &RegularTree, u: &[Dir], v: &[Dir]) -> Result<RegularTree> {
    if v.is_empty() {
        return Err(Error::Tree("the pumped segment must be non-empty".into()));
    }
    if u.iter().chain(v).any(|&d| d > 1) {
        return Err(Error::Tree("directions are 0 or 1".into()));
    }
    let path: Vec<Dir> = u.iter().chain(v).copied().collect();
    let base = t.len();
    let mut labels = t.labels.clone();
    let mut succ = t.succ.clone();
    let mut n = t.root;
    for (k, &d) in path.iter().enumerate() {
        labels.push(t.labels[n].clone());
        let mut s = t.succ[n];
        s[d as usize] = if k + 1 < path.len() { base + k + 1 } else { base + u.len() };
        succ.push(s);
        n = t.succ[n][d as usize];
    }
    Ok(RegularTree::new(labels, succ, base)?.pruned())
}

struct FollowB {
    registers: Vec<u32>,
}

impl RegPolicy for FollowB {
    fn register(&self, _cfg: &RegConfig, edge: EdgeId) -> Result<u32> {
        Ok(self.registers[edge])
    }
}

/// Register Eve picks when B reports priority `p`.
pub fn register_for(j: PriorityIndex, p: Priority) -> Result<u32> {
    if !j.contains(p) {
        return Err(Error::Guidance(format!("B-priority {p} lies outside J = {j}")));
    }
    Ok(if p == j.lo() && j.contains(1) { 0 } else { p / 2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuidedVerdict {
    pub verdict: bool,
    pub configurations: usize,
}

/// Eve's strategy in `Reg{J}{N}` over the projection of `ρ_A` that follows
/// the priorities of `ρ_B` and never escalates; the verdict is whether the
/// resulting Adam-only game is even.
pub fn guided_reg_strategy(
    a: &TreeAutomaton,
    b: &TreeAutomaton,
    rho_a: &RegularRun,
    rho_b: &RegularRun,
    pairing: &[usize],
    spec: &RegSpec,
    cap: usize,
) -> Result<GuidedVerdict> {
    let j = spec.output_index();
    let mut registers = Vec::with_capacity(2 * rho_a.len());
    for &y in &pairing[..rho_a.len()] {
        let tb = b.transition(rho_b.nodes[y].transition);
        for d in 0..2 {
            registers.push(register_for(j, tb.priorities[d])?);
        }
    }
    let game = projected_game(a, rho_a);
    let expansion = expand_reg_restricted(&game, spec, cap, &FollowB { registers })?;
    let check = expansion.eve_choices_even()?;
    Ok(GuidedVerdict { verdict: check.even, configurations: expansion.game.vertex_count() })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{examples, membership, Transition};

    fn idx(lo: u32, hi: u32) -> PriorityIndex {
        PriorityIndex::new(lo, hi).unwrap()
    }

    fn tree(labels: &[&str], succ: &[[usize; 2]]) -> RegularTree {
        RegularTree::new(labels.iter().map(|s| s.to_string()).collect(), succ.to_vec(), 0).unwrap()
    }

    #[test]
    fn identity_guidance_is_isomorphic() {
        let b = examples::somewhere_a();
        let g = GuidingFunction::identity(&b);
        let t = tree(&["b", "a"], &[[0, 1], [1, 1]]);
        let inst = guide_tree(&b, &b, &g, &t).unwrap().unwrap();
        assert_eq!(inst.guided.run, inst.rho_b);
        assert_eq!(inst.guided.pairing, (0..inst.rho_b.len()).collect::<Vec<_>>());
    }

    #[test]
    fn universal_guided_by_anything() {
        let a = examples::universal(&["a", "b"]);
        let b = examples::somewhere_a();
        let g = GuidingFunction::new(&a, &b, b.transitions().iter().enumerate().map(|(k, t)| ((0, k), t.letter)))
            .unwrap();
        let t = tree(&["b", "a"], &[[1, 0], [1, 1]]);
        let inst = guide_tree(&a, &b, &g, &t).unwrap().unwrap();
        inst.guided.run.validate(&a, &t).unwrap();
        let report = check_preservation(&a, &b, &g, &[t]).unwrap();
        assert!(report.holds);
    }

    /// A two-state automaton with a choice, driven by a two-state B.
    fn handcrafted() -> (TreeAutomaton, TreeAutomaton) {
        let t = |from, letter, left, right, p0, p1| Transition { from, letter, left, right, priorities: [p0, p1] };
        let a = TreeAutomaton::new(
            vec!["a".into(), "b".into()],
            vec!["x".into(), "y".into()],
            0,
            vec![
                t(0, 0, 1, 0, 2, 2),
                t(0, 0, 0, 1, 2, 2),
                t(0, 1, 0, 0, 2, 2),
                t(1, 0, 1, 1, 2, 2),
                t(1, 1, 0, 1, 2, 2),
            ],
            idx(2, 2),
        )
        .unwrap();
        let b = TreeAutomaton::new(
            vec!["a".into(), "b".into()],
            vec!["p".into(), "q".into()],
            0,
            vec![t(0, 0, 1, 1, 2, 2), t(0, 1, 0, 1, 2, 2), t(1, 0, 1, 0, 2, 2), t(1, 1, 1, 1, 2, 2)],
            idx(2, 2),
        )
        .unwrap();
        (a, b)
    }

    #[test]
    fn guided_labels_follow_table() {
        let (a, b) = handcrafted();
        let table = [
            ((0, 0), 1),
            ((0, 1), 2),
            ((0, 2), 0),
            ((0, 3), 2),
            ((1, 0), 3),
            ((1, 1), 4),
            ((1, 2), 3),
            ((1, 3), 4),
        ];
        let g = GuidingFunction::new(&a, &b, table).unwrap();
        let t = tree(&["a", "b"], &[[1, 1], [0, 1]]);
        let inst = guide_tree(&a, &b, &g, &t).unwrap().unwrap();
        inst.guided.run.validate(&a, &t).unwrap();
        for (x, node) in inst.guided.run.nodes.iter().enumerate() {
            let p = inst.guided.run.state(&a, x);
            let tb = inst.rho_b.nodes[inst.guided.pairing[x]].transition;
            assert_eq!(Some(node.transition), table.iter().find(|e| e.0 == (p, tb)).map(|e| e.1));
        }
    }

    #[test]
    fn incompatible_entry_rejected() {
        let (a, b) = handcrafted();
        assert!(GuidingFunction::new(&a, &b, [((0, 0), 2)]).is_err());
        assert!(GuidingFunction::new(&a, &b, [((1, 0), 1)]).is_err());
    }

    #[test]
    fn entries_round_trip() {
        let (a, b) = handcrafted();
        let g = GuidingFunction::identity(&b);
        let text = g.to_json(&b, &b);
        let back = GuidingFunction::from_json(&b, &b, &text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(&b, &b), text);
        let _ = a;
    }

    #[test]
    fn adversarial_guide_violates() {
        // A has an all-odd trap state; g sends every choice into it.
        let b = examples::universal(&["a", "b"]);
        let t = |from, letter, left, right, p| Transition { from, letter, left, right, priorities: [p, p] };
        let a = TreeAutomaton::new(
            vec!["a".into(), "b".into()],
            vec!["ok".into(), "trap".into()],
            0,
            vec![t(0, 0, 0, 0, 2), t(0, 0, 1, 1, 2), t(0, 1, 0, 0, 2), t(1, 0, 1, 1, 1), t(1, 1, 1, 1, 1)],
            idx(1, 2),
        )
        .unwrap();
        let g = GuidingFunction::new(&a, &b, [((0, 0), 1), ((0, 1), 2), ((1, 0), 3), ((1, 1), 4)]).unwrap();
        let report = check_preservation(&a, &b, &g, &[RegularTree::constant("a")]).unwrap();
        assert!(!report.holds);
        let w = report.cases[0].witness.clone().unwrap();
        assert_eq!(w.cycle_max().unwrap() % 2, 1);
    }

    #[test]
    fn rejected_corpus_tree_is_an_error() {
        let b = examples::somewhere_a();
        let g = GuidingFunction::identity(&b);
        let err = check_preservation(&b, &b, &g, &[RegularTree::constant("b")]).unwrap_err();
        assert!(matches!(err, Error::NotAccepted(0)));
    }

    #[test]
    fn identity_pump_check_passes() {
        let b = examples::somewhere_a();
        let g = GuidingFunction::identity(&b);
        let t = tree(&["b", "b", "a"], &[[1, 2], [0, 2], [2, 2]]);
        let inst = guide_tree(&b, &b, &g, &t).unwrap().unwrap();
        let r = pump_check(&b, &b, &g, &inst.guided.run, &inst.rho_b, &inst.guided.pairing).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.segments > 0);
    }

    #[test]
    fn pump_trivial_cases() {
        let c = RegularTree::constant("b");
        assert!(pump_tree(&c, &[0, 1], &[1, 1, 0]).unwrap().same_tree(&c));
        let t = tree(&["b", "a"], &[[0, 1], [1, 1]]);
        assert!(pump_tree(&t, &[], &[0]).unwrap().same_tree(&t));
        assert!(pump_tree(&t, &[0], &[]).is_err());
    }

    #[test]
    fn pumping_removes_the_a() {
        // b along the leftmost branch, a only at 0·0·1.
        let t = tree(&["b", "b", "b", "a", "b"], &[[1, 4], [2, 4], [4, 3], [4, 4], [4, 4]]);
        let a = examples::somewhere_a();
        assert!(membership(&a, &t).unwrap());
        let pumped = pump_tree(&t, &[], &[0, 0]).unwrap();
        assert!(!membership(&a, &pumped).unwrap());
    }

    #[test]
    fn register_choice() {
        assert_eq!(register_for(idx(1, 2), 1).unwrap(), 0);
        assert_eq!(register_for(idx(1, 3), 3).unwrap(), 1);
        assert_eq!(register_for(idx(2, 3), 2).unwrap(), 1);
        assert_eq!(register_for(idx(2, 5), 5).unwrap(), 2);
        assert!(register_for(idx(2, 3), 4).is_err());
    }

    #[test]
    fn all_even_b_always_picks_r1() {
        let b = examples::universal(&["a", "b"]);
        let g = GuidingFunction::identity(&b);
        let t = tree(&["a", "b"], &[[1, 0], [0, 1]]);
        let inst = guide_tree(&b, &b, &g, &t).unwrap().unwrap();
        for n in [0, 1, 4] {
            let spec = RegSpec::new(idx(2, 2), idx(2, 3), n).unwrap();
            let v = guided_reg_strategy(&b, &b, &inst.guided.run, &inst.rho_b, &inst.guided.pairing, &spec, 1000)
                .unwrap();
            assert!(v.verdict);
        }
    }
}
