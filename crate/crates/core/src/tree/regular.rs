use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::automaton::{TransitionId, TreeAutomaton};
use crate::error::{Error, Result};

pub type NodeId = usize;

/// A direction in the binary tree: 0 (left) or 1 (right).
pub type Dir = u8;

/// A regular binary tree given by a finite pointed graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularTree {
    pub labels: Vec<String>,
    pub succ: Vec<[NodeId; 2]>,
    pub root: NodeId,
}

#[derive(Serialize, Deserialize)]
struct NodeFile {
    id: String,
    label: String,
    succ0: String,
    succ1: String,
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    nodes: Vec<NodeFile>,
    root: String,
}

impl RegularTree {
    pub fn new(labels: Vec<String>, succ: Vec<[NodeId; 2]>, root: NodeId) -> Result<Self> {
        if labels.is_empty() || labels.len() != succ.len() {
            return Err(Error::Tree("node and successor lists must be non-empty and aligned".into()));
        }
        let n = labels.len();
        if root >= n || succ.iter().flatten().any(|&s| s >= n) {
            return Err(Error::Tree("successor or root out of range".into()));
        }
        Ok(RegularTree { labels, succ, root })
    }

    /// The tree whose every node carries `label`.
    pub fn constant(label: &str) -> Self {
        RegularTree {
            labels: vec![label.to_string()],
            succ: vec![[0, 0]],
            root: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Node reached from the root along `path`.
    pub fn walk(&self, path: &[Dir]) -> NodeId {
        path.iter().fold(self.root, |n, &d| self.succ[n][d as usize])
    }

    pub fn label_at(&self, path: &[Dir]) -> &str {
        &self.labels[self.walk(path)]
    }

    /// Keeps the nodes reachable from the root, numbered in BFS order.
    pub fn pruned(&self) -> RegularTree {
        let mut ids = HashMap::new();
        let mut order = vec![self.root];
        ids.insert(self.root, 0);
        let mut k = 0;
        while k < order.len() {
            let n = order[k];
            for s in self.succ[n] {
                if let std::collections::hash_map::Entry::Vacant(e) = ids.entry(s) {
                    e.insert(order.len());
                    order.push(s);
                }
            }
            k += 1;
        }
        RegularTree {
            labels: order.iter().map(|&n| self.labels[n].clone()).collect(),
            succ: order.iter().map(|&n| self.succ[n].map(|s| ids[&s])).collect(),
            root: 0,
        }
    }

    /// Whether both presentations unfold to the same infinite tree.
    pub fn same_tree(&self, other: &RegularTree) -> bool {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([(self.root, other.root)]);
        while let Some((x, y)) = queue.pop_front() {
            if !seen.insert((x, y)) {
                continue;
            }
            if self.labels[x] != other.labels[y] {
                return false;
            }
            for d in 0..2 {
                queue.push_back((self.succ[x][d], other.succ[y][d]));
            }
        }
        true
    }

    pub fn to_json(&self) -> String {
        let file = TreeFile {
            nodes: (0..self.len())
                .map(|n| NodeFile {
                    id: format!("n{n}"),
                    label: self.labels[n].clone(),
                    succ0: format!("n{}", self.succ[n][0]),
                    succ1: format!("n{}", self.succ[n][1]),
                })
                .collect(),
            root: format!("n{}", self.root),
        };
        serde_json::to_string_pretty(&file).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TreeFile = serde_json::from_str(text)?;
        let mut ids = HashMap::new();
        for (k, node) in file.nodes.iter().enumerate() {
            if ids.insert(node.id.as_str(), k).is_some() {
                return Err(Error::Tree(format!("duplicate node `{}`", node.id)));
            }
        }
        let id = |s: &str| ids.get(s).copied().ok_or_else(|| Error::Tree(format!("unknown node `{s}`")));
        let mut succ = Vec::with_capacity(file.nodes.len());
        for node in &file.nodes {
            succ.push([id(&node.succ0)?, id(&node.succ1)?]);
        }
        let labels = file.nodes.iter().map(|n| n.label.clone()).collect();
        RegularTree::new(labels, succ, id(&file.root)?)
    }

    /// Letter ids of every node in `a`'s alphabet.
    pub fn letters(&self, a: &TreeAutomaton) -> Result<Vec<usize>> {
        self.labels
            .iter()
            .map(|l| {
                a.letter_id(l)
                    .ok_or_else(|| Error::Tree(format!("label `{l}` is not in the alphabet")))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunNode {
    pub tree_node: NodeId,
    pub transition: TransitionId,
    pub succ: [usize; 2],
}

/// A regular run: a finite graph of tree nodes labelled with transitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularRun {
    pub nodes: Vec<RunNode>,
    pub root: usize,
}

impl RegularRun {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// State of `a` at run node `x`.
    pub fn state(&self, a: &TreeAutomaton, x: usize) -> usize {
        a.transition(self.nodes[x].transition).from
    }

    /// Local consistency of the run with `a` over `t`.
    pub fn validate(&self, a: &TreeAutomaton, t: &RegularTree) -> Result<()> {
        let letters = t.letters(a)?;
        let root = self.nodes.get(self.root).ok_or_else(|| Error::Run("root out of range".into()))?;
        if root.tree_node != t.root {
            return Err(Error::Run("run root is not over the tree root".into()));
        }
        if a.transition(root.transition).from != a.initial() {
            return Err(Error::Run("root transition does not leave the initial state".into()));
        }
        for (x, node) in self.nodes.iter().enumerate() {
            let tr = a
                .transitions()
                .get(node.transition)
                .ok_or_else(|| Error::Run(format!("node {x}: unknown transition")))?;
            if tr.letter != letters[node.tree_node] {
                return Err(Error::Run(format!("node {x}: transition reads the wrong letter")));
            }
            for d in 0..2 {
                let child = self
                    .nodes
                    .get(node.succ[d])
                    .ok_or_else(|| Error::Run(format!("node {x}: successor out of range")))?;
                if child.tree_node != t.succ[node.tree_node][d] {
                    return Err(Error::Run(format!("node {x}: successor {d} is over the wrong tree node")));
                }
                if a.transition(child.transition).from != tr.target(d) {
                    return Err(Error::Run(format!("node {x}: successor {d} starts in the wrong state")));
                }
            }
        }
        Ok(())
    }
}
