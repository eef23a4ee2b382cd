//! Small progress measures: lifting of Eve's progress measures to a fixpoint.
//!
//! Measures are tuples indexed by the odd priorities of the arena, compared
//! from the highest priority down. `None` is the top element.

use std::cmp::Ordering;
use std::collections::VecDeque;

use super::arena::Arena;
use crate::index::Player;

type Measure = Option<Vec<u32>>;

pub(crate) struct ProgressMeasures<'a> {
    arena: &'a Arena,
    /// Odd priorities in ascending order, one measure component each.
    dims: Vec<u32>,
    bound: Vec<u32>,
    measure: Vec<Measure>,
}

fn compare(a: &Measure, b: &Measure) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.iter().rev().cmp(y.iter().rev()),
    }
}

impl<'a> ProgressMeasures<'a> {
    pub fn new(arena: &'a Arena) -> Self {
        let mut dims: Vec<u32> = arena.priority.iter().copied().filter(|p| p % 2 == 1).collect();
        dims.sort_unstable();
        dims.dedup();
        let bound = dims
            .iter()
            .map(|&d| arena.priority.iter().filter(|&&p| p == d).count() as u32)
            .collect();
        let zero = Some(vec![0; dims.len()]);
        ProgressMeasures {
            arena,
            dims,
            bound,
            measure: vec![zero; arena.len()],
        }
    }

    /// Least measure that is `>=` (or `>` at odd priority) the successor's
    /// measure, truncated at the priority of `v`.
    fn prog(&self, v: usize, w: usize) -> Measure {
        let m = self.measure[w].as_ref()?;
        let p = self.arena.priority[v];
        let mut out = m.clone();
        let first_kept = self.dims.partition_point(|&d| d < p);
        for c in &mut out[..first_kept] {
            *c = 0;
        }
        if p % 2 == 1 {
            let mut k = first_kept;
            loop {
                if k == out.len() {
                    return None;
                }
                out[k] += 1;
                if out[k] > self.bound[k] {
                    out[k] = 0;
                    k += 1;
                } else {
                    break;
                }
            }
        }
        Some(out)
    }

    fn best(&self, v: usize) -> Measure {
        let cands = self.arena.succ[v].iter().map(|&w| self.prog(v, w));
        let pick = match self.arena.owner[v] {
            Player::Eve => cands.min_by(compare),
            Player::Adam => cands.max_by(compare),
        };
        pick.expect("every arena vertex has a successor")
    }

    pub fn run(&mut self) {
        let n = self.arena.len();
        let mut queued = vec![true; n];
        let mut work: VecDeque<usize> = (0..n).collect();
        while let Some(v) = work.pop_front() {
            queued[v] = false;
            if self.measure[v].is_none() {
                continue;
            }
            let lifted = self.best(v);
            if compare(&lifted, &self.measure[v]) == Ordering::Greater {
                self.measure[v] = lifted;
                for &u in &self.arena.pred[v] {
                    if !queued[u] && self.measure[u].is_some() {
                        queued[u] = true;
                        work.push_back(u);
                    }
                }
            }
        }
    }

    pub fn eve_wins(&self, v: usize) -> bool {
        self.measure[v].is_some()
    }

    /// Successor realising the minimal progress, lowest id on ties.
    pub fn eve_move(&self, v: usize) -> usize {
        let mut best: Option<(Measure, usize)> = None;
        for &w in &self.arena.succ[v] {
            let m = self.prog(v, w);
            let better = match &best {
                None => true,
                Some((b, _)) => compare(&m, b) == Ordering::Less,
            };
            if better {
                best = Some((m, w));
            }
        }
        best.expect("every arena vertex has a successor").1
    }
}
