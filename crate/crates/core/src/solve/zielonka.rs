//! Recursive attractor decomposition.
//!
//! The second recursive call is turned into a loop, so recursion depth is
//! bounded by the number of distinct priorities. Subgames are nested, so
//! membership is a single level per vertex: `v` belongs to the subgame at
//! level `k` iff `level[v] >= k`. Every step costs time proportional to the
//! subgame, not the arena.

use std::collections::VecDeque;

use super::arena::Arena;
use crate::index::Player;

pub(crate) struct Zielonka<'a> {
    arena: &'a Arena,
    /// Chosen successor (arena vertex) for the vertex's winner.
    pub strategy: Vec<Option<usize>>,
    level: Vec<u32>,
    stamp: u32,
    in_attr: Vec<u32>,
    counted: Vec<u32>,
    pending: Vec<usize>,
}

fn side(p: Player) -> usize {
    match p {
        Player::Eve => 0,
        Player::Adam => 1,
    }
}

impl<'a> Zielonka<'a> {
    pub fn new(arena: &'a Arena) -> Self {
        let n = arena.len();
        Zielonka {
            arena,
            strategy: vec![None; n],
            level: vec![1; n],
            stamp: 0,
            in_attr: vec![0; n],
            counted: vec![0; n],
            pending: vec![0; n],
        }
    }

    /// Winner of every arena vertex.
    pub fn run(&mut self) -> Vec<Player> {
        let n = self.arena.len();
        let [eve, _] = self.solve((0..n).collect(), 1);
        let mut winners = vec![Player::Adam; n];
        for v in eve {
            winners[v] = Player::Eve;
        }
        winners
    }

    fn solve(&mut self, mut game: Vec<usize>, k: u32) -> [Vec<usize>; 2] {
        let mut won = [Vec::new(), Vec::new()];
        loop {
            let Some(d) = game.iter().map(|&v| self.arena.priority[v]).max() else {
                return won;
            };
            let alpha = Player::favoured_by(d);
            let top: Vec<usize> = game
                .iter()
                .copied()
                .filter(|&v| self.arena.priority[v] == d)
                .collect();
            self.attractor(k, &top, alpha);
            let rest: Vec<usize> = game
                .iter()
                .copied()
                .filter(|&v| self.in_attr[v] != self.stamp)
                .collect();
            for &v in &rest {
                self.level[v] = k + 1;
            }
            let mut sub = self.solve(rest.clone(), k + 1);
            for &v in &rest {
                self.level[v] = k;
            }
            let opp = std::mem::take(&mut sub[side(alpha.opponent())]);

            if opp.is_empty() {
                for &v in &top {
                    if self.arena.owner[v] == alpha {
                        self.strategy[v] = self.arena.succ[v].iter().copied().find(|&w| self.level[w] >= k);
                    }
                }
                won[side(alpha)].extend(game);
                return won;
            }

            let back = self.attractor(k, &opp, alpha.opponent());
            for &v in &back {
                self.level[v] = k - 1;
            }
            won[side(alpha.opponent())].extend(back);
            game.retain(|&v| self.level[v] >= k);
        }
    }

    /// Attractor of `target` for `player` inside the subgame at level `k`,
    /// recording the attracting move of every vertex `player` owns. Members
    /// are also marked with the current stamp.
    fn attractor(&mut self, k: u32, target: &[usize], player: Player) -> Vec<usize> {
        let arena = self.arena;
        self.stamp += 1;
        let stamp = self.stamp;
        let mut attr = Vec::new();
        let mut queue = VecDeque::new();
        for &t in target {
            if self.in_attr[t] != stamp {
                self.in_attr[t] = stamp;
                attr.push(t);
                queue.push_back(t);
            }
        }
        while let Some(w) = queue.pop_front() {
            for &u in &arena.pred[w] {
                if self.level[u] < k || self.in_attr[u] == stamp {
                    continue;
                }
                let attracted = if arena.owner[u] == player {
                    self.strategy[u] = Some(w);
                    true
                } else {
                    if self.counted[u] != stamp {
                        self.counted[u] = stamp;
                        self.pending[u] = arena.succ[u].iter().filter(|&&x| self.level[x] >= k).count();
                    }
                    self.pending[u] -= 1;
                    self.pending[u] == 0
                };
                if attracted {
                    self.in_attr[u] = stamp;
                    attr.push(u);
                    queue.push_back(u);
                }
            }
        }
        attr
    }
}
