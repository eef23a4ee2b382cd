//! The classic register game with `k` registers.
//!
//! Registers `r_1..r_k` hold the largest priority seen since they were last
//! reset. After each move Eve either skips (output 1) or resets some `r_i`,
//! which outputs `2i` or `2i + 1` by the parity of its content; the lower
//! registers shift up and `r_1` becomes empty.

use std::fmt;

use crate::error::{Error, Result};
use crate::explore::{explore, Expansion, Explored};
use crate::game::{ParityGame, VertexId};
use crate::index::{Player, Priority, PriorityIndex};
use crate::solve::{solve, Solver};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LehtinenNode {
    pub position: VertexId,
    /// `registers[0]` is `r_1`. Empty registers hold 0.
    pub registers: Vec<Priority>,
    pub awaiting_reset: bool,
}

impl fmt::Display for LehtinenNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let regs: Vec<String> = self.registers.iter().map(|r| r.to_string()).collect();
        let phase = if self.awaiting_reset { "reset" } else { "move" };
        write!(f, "p{} {} [{}]", self.position, phase, regs.join(","))
    }
}

/// Register count used by the baseline: `ceil(log2 n) + 1`.
pub fn default_registers(vertex_count: usize) -> usize {
    let n = vertex_count.max(1);
    (usize::BITS - (n - 1).leading_zeros()) as usize + 1
}

fn step(g: &ParityGame, k: usize, node: &LehtinenNode) -> Result<Expansion<LehtinenNode>> {
    if !node.awaiting_reset {
        let succ = g
            .out(node.position)
            .iter()
            .map(|&e| {
                let edge = g.edge(e);
                let registers = node.registers.iter().map(|&r| r.max(edge.priority)).collect();
                let next = LehtinenNode {
                    position: edge.dst,
                    registers,
                    awaiting_reset: true,
                };
                (next, 1)
            })
            .collect();
        return Ok((g.owner(node.position), succ));
    }
    let mut succ = Vec::with_capacity(k + 1);
    let skip = LehtinenNode {
        awaiting_reset: false,
        ..node.clone()
    };
    succ.push((skip, 1));
    for i in 1..=k {
        let content = node.registers[i - 1];
        let output = 2 * i as Priority + content % 2;
        let mut registers = node.registers.clone();
        for r in (1..i).rev() {
            registers[r] = registers[r - 1];
        }
        registers[0] = 0;
        let next = LehtinenNode {
            position: node.position,
            registers,
            awaiting_reset: false,
        };
        succ.push((next, output));
    }
    Ok((Player::Eve, succ))
}

pub fn expand_lehtinen(g: &ParityGame, k: usize, cap: usize) -> Result<Explored<LehtinenNode>> {
    if k == 0 {
        return Err(Error::InvalidIndex("at least one register is needed".into()));
    }
    let index = PriorityIndex::new(1, 2 * k as Priority + 1)?;
    let init = LehtinenNode {
        position: g.initial(),
        registers: vec![0; k],
        awaiting_reset: false,
    };
    explore(init, index, cap, |n| step(g, k, n))
}

/// Winner of the register game from the initial configuration.
pub fn solve_lehtinen(g: &ParityGame, k: usize, solver: Solver, cap: usize) -> Result<(Player, usize)> {
    let exp = expand_lehtinen(g, k, cap)?;
    let r = solve(&exp.game, solver);
    Ok((r.winner(0), exp.game.vertex_count()))
}
