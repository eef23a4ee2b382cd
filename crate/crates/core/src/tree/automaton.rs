use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{Priority, PriorityIndex};

pub type StateId = usize;
pub type LetterId = usize;
pub type TransitionId = usize;

/// `(from, letter, left, right)` with priorities `(p0, p1)` for the two directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: StateId,
    pub letter: LetterId,
    pub left: StateId,
    pub right: StateId,
    pub priorities: [Priority; 2],
}

impl Transition {
    pub fn target(&self, dir: usize) -> StateId {
        if dir == 0 {
            self.left
        } else {
            self.right
        }
    }
}

/// A complete nondeterministic parity tree automaton over binary trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAutomaton {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: StateId,
    transitions: Vec<Transition>,
    index: PriorityIndex,
    letter_ids: HashMap<String, LetterId>,
    state_ids: HashMap<String, StateId>,
    /// Transition ids by `from * |alphabet| + letter`.
    by_source: Vec<Vec<TransitionId>>,
}

#[derive(Serialize, Deserialize)]
struct TransitionFile {
    from: String,
    letter: String,
    left: String,
    right: String,
    p0: Priority,
    p1: Priority,
}

/// Origin of a synthesized automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source_automaton_hash: String,
    #[serde(rename = "J")]
    pub j: PriorityIndex,
    #[serde(rename = "N")]
    pub n: u32,
    pub reset_reading: crate::reg::ResetReading,
}

#[derive(Serialize, Deserialize)]
struct AutomatonFile {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: String,
    index: PriorityIndex,
    transitions: Vec<TransitionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

fn unique_ids(names: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut ids = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if ids.insert(n.clone(), i).is_some() {
            return Err(Error::Automaton(format!("duplicate {what} `{n}`")));
        }
    }
    Ok(ids)
}

impl TreeAutomaton {
    /// Validates references, priorities, duplicates and completeness.
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: StateId,
        transitions: Vec<Transition>,
        index: PriorityIndex,
    ) -> Result<Self> {
        if alphabet.is_empty() || states.is_empty() {
            return Err(Error::Automaton("alphabet and state set must be non-empty".into()));
        }
        let letter_ids = unique_ids(&alphabet, "letter")?;
        let state_ids = unique_ids(&states, "state")?;
        if initial >= states.len() {
            return Err(Error::Automaton(format!("initial state {initial} does not exist")));
        }
        let mut seen = HashSet::new();
        let mut by_source = vec![Vec::new(); states.len() * alphabet.len()];
        for (id, t) in transitions.iter().enumerate() {
            if t.from >= states.len() || t.left >= states.len() || t.right >= states.len() {
                return Err(Error::Automaton(format!("transition {id} references an unknown state")));
            }
            if t.letter >= alphabet.len() {
                return Err(Error::Automaton(format!("transition {id} references an unknown letter")));
            }
            if let Some(&p) = t.priorities.iter().find(|&&p| !index.contains(p)) {
                return Err(Error::Automaton(format!(
                    "transition {id} has priority {p} outside index {index}"
                )));
            }
            if !seen.insert(*t) {
                return Err(Error::Automaton(format!(
                    "duplicate transition ({}, {}, {}, {})",
                    states[t.from], alphabet[t.letter], states[t.left], states[t.right]
                )));
            }
            by_source[t.from * alphabet.len() + t.letter].push(id);
        }
        for q in 0..states.len() {
            for a in 0..alphabet.len() {
                if by_source[q * alphabet.len() + a].is_empty() {
                    return Err(Error::Automaton(format!(
                        "incomplete: no transition from `{}` over `{}`",
                        states[q], alphabet[a]
                    )));
                }
            }
        }
        Ok(TreeAutomaton {
            alphabet,
            states,
            initial,
            transitions,
            index,
            letter_ids,
            state_ids,
            by_source,
        })
    }

    /// Adds a rejecting sink for every missing `(state, letter)` pair.
    pub fn completed(
        alphabet: Vec<String>,
        mut states: Vec<String>,
        initial: StateId,
        mut transitions: Vec<Transition>,
        index: PriorityIndex,
    ) -> Result<Self> {
        let missing: Vec<(StateId, LetterId)> = (0..states.len())
            .flat_map(|q| (0..alphabet.len()).map(move |a| (q, a)))
            .filter(|&(q, a)| !transitions.iter().any(|t| t.from == q && t.letter == a))
            .collect();
        if missing.is_empty() {
            return TreeAutomaton::new(alphabet, states, initial, transitions, index);
        }
        let odd = index.lo() | 1;
        let index = PriorityIndex::new(index.lo(), index.hi().max(odd))?;
        let mut name = "sink".to_string();
        while states.contains(&name) {
            name.push('\'');
        }
        let sink = states.len();
        states.push(name);
        for (q, a) in missing {
            transitions.push(Transition { from: q, letter: a, left: sink, right: sink, priorities: [odd, odd] });
        }
        for a in 0..alphabet.len() {
            transitions.push(Transition { from: sink, letter: a, left: sink, right: sink, priorities: [odd, odd] });
        }
        TreeAutomaton::new(alphabet, states, initial, transitions, index)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn index(&self) -> PriorityIndex {
        self.index
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, id: TransitionId) -> &Transition {
        &self.transitions[id]
    }

    pub fn letter_id(&self, letter: &str) -> Option<LetterId> {
        self.letter_ids.get(letter).copied()
    }

    pub fn state_id(&self, state: &str) -> Option<StateId> {
        self.state_ids.get(state).copied()
    }

    /// Transitions from `q` over letter `a`, in declaration order.
    pub fn from(&self, q: StateId, a: LetterId) -> &[TransitionId] {
        &self.by_source[q * self.alphabet.len() + a]
    }

    /// Transitions matching `(from, letter, left, right)` regardless of priorities.
    pub fn find(&self, from: StateId, letter: LetterId, left: StateId, right: StateId) -> Vec<TransitionId> {
        self.from(from, letter)
            .iter()
            .copied()
            .filter(|&t| self.transitions[t].left == left && self.transitions[t].right == right)
            .collect()
    }

    pub fn describe_transition(&self, id: TransitionId) -> String {
        let t = &self.transitions[id];
        format!(
            "({}, {}, {}, {})@({}, {})",
            self.states[t.from],
            self.alphabet[t.letter],
            self.states[t.left],
            self.states[t.right],
            t.priorities[0],
            t.priorities[1]
        )
    }

    fn to_file(&self, provenance: Option<Provenance>) -> AutomatonFile {
        AutomatonFile {
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            initial: self.states[self.initial].clone(),
            index: self.index,
            transitions: self
                .transitions
                .iter()
                .map(|t| TransitionFile {
                    from: self.states[t.from].clone(),
                    letter: self.alphabet[t.letter].clone(),
                    left: self.states[t.left].clone(),
                    right: self.states[t.right].clone(),
                    p0: t.priorities[0],
                    p1: t.priorities[1],
                })
                .collect(),
            provenance,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file(None)).expect("serializable") + "\n"
    }

    pub fn to_json_with_provenance(&self, provenance: Provenance) -> String {
        serde_json::to_string_pretty(&self.to_file(Some(provenance))).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(Self::from_json_with_provenance(text)?.0)
    }

    pub fn from_json_with_provenance(text: &str) -> Result<(Self, Option<Provenance>)> {
        Self::parse(text, false)
    }

    /// Like [`TreeAutomaton::from_json`], adding a rejecting sink when incomplete.
    pub fn from_json_completed(text: &str) -> Result<Self> {
        Ok(Self::parse(text, true)?.0)
    }

    fn parse(text: &str, complete: bool) -> Result<(Self, Option<Provenance>)> {
        let file: AutomatonFile = serde_json::from_str(text)?;
        let letter_ids = unique_ids(&file.alphabet, "letter")?;
        let state_ids = unique_ids(&file.states, "state")?;
        let state = |s: &str| {
            state_ids
                .get(s)
                .copied()
                .ok_or_else(|| Error::Automaton(format!("unknown state `{s}`")))
        };
        let initial = state(&file.initial)?;
        let mut transitions = Vec::with_capacity(file.transitions.len());
        for t in &file.transitions {
            let letter = letter_ids
                .get(&t.letter)
                .copied()
                .ok_or_else(|| Error::Automaton(format!("unknown letter `{}`", t.letter)))?;
            transitions.push(Transition {
                from: state(&t.from)?,
                letter,
                left: state(&t.left)?,
                right: state(&t.right)?,
                priorities: [t.p0, t.p1],
            });
        }
        let a = if complete {
            TreeAutomaton::completed(file.alphabet, file.states, initial, transitions, file.index)?
        } else {
            TreeAutomaton::new(file.alphabet, file.states, initial, transitions, file.index)?
        };
        Ok((a, file.provenance))
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}
