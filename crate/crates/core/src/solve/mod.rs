//! Parity game solvers.
//!
//! Two independent algorithms, so that each can serve as an oracle for the
//! other: recursive attractor decomposition and small progress measures.

mod arena;
mod spm;
mod zielonka;

use std::fmt;
use std::str::FromStr;

use arena::Arena;

use crate::error::{Error, Result};
use crate::game::{ParityGame, SolveResult, Strategy};
use crate::index::Player;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Solver {
    #[default]
    Zielonka,
    ProgressMeasures,
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solver::Zielonka => write!(f, "zielonka"),
            Solver::ProgressMeasures => write!(f, "spm"),
        }
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zielonka" => Ok(Solver::Zielonka),
            "spm" | "progress-measures" => Ok(Solver::ProgressMeasures),
            other => Err(Error::Consistency(format!("unknown solver `{other}`"))),
        }
    }
}

pub fn solve(game: &ParityGame, solver: Solver) -> SolveResult {
    match solver {
        Solver::Zielonka => solve_zielonka(game),
        Solver::ProgressMeasures => solve_progress_measures(game),
    }
}

/// Runs both solvers and fails if their winner partitions differ.
pub fn solve_checked(game: &ParityGame) -> Result<SolveResult> {
    let z = solve_zielonka(game);
    let p = solve_progress_measures(game);
    if z.winners != p.winners {
        let v = (0..z.winners.len()).find(|&v| z.winners[v] != p.winners[v]).unwrap();
        return Err(Error::Consistency(format!(
            "solvers disagree on vertex {v}: zielonka says {}, progress measures say {}",
            z.winners[v], p.winners[v]
        )));
    }
    Ok(z)
}

/// Lowest-id edge for every vertex of `player` not covered by `moves`.
fn complete(game: &ParityGame, player: Player, mut strategy: Strategy) -> Strategy {
    for v in 0..game.vertex_count() {
        if game.owner(v) == player && strategy.get(v).is_none() {
            strategy.set(v, game.out(v)[0]);
        }
    }
    strategy
}

pub fn solve_zielonka(game: &ParityGame) -> SolveResult {
    let arena = Arena::new(game);
    let mut z = zielonka::Zielonka::new(&arena);
    let all = z.run();
    let n = game.vertex_count();
    let winners = all[..n].to_vec();

    let mut eve = Strategy::empty(Player::Eve, n);
    let mut adam = Strategy::empty(Player::Adam, n);
    for v in 0..n {
        let owner = game.owner(v);
        if owner != winners[v] {
            continue;
        }
        let succ = z.strategy[v].expect("winner has a recorded move");
        let target = match owner {
            Player::Eve => &mut eve,
            Player::Adam => &mut adam,
        };
        target.set(v, arena.edge_of(succ));
    }
    SolveResult {
        winners,
        eve_strategy: complete(game, Player::Eve, eve),
        adam_strategy: complete(game, Player::Adam, adam),
    }
}

pub fn solve_progress_measures(game: &ParityGame) -> SolveResult {
    let n = game.vertex_count();
    let arena = Arena::new(game);
    let mut even = spm::ProgressMeasures::new(&arena);
    even.run();
    let dual_arena = Arena::dual(game);
    let mut odd = spm::ProgressMeasures::new(&dual_arena);
    odd.run();

    let mut winners = Vec::with_capacity(n);
    let mut eve = Strategy::empty(Player::Eve, n);
    let mut adam = Strategy::empty(Player::Adam, n);
    for v in 0..n {
        let (e, a) = (even.eve_wins(v), odd.eve_wins(v));
        debug_assert!(e != a, "progress measures must partition vertex {v}");
        if e {
            winners.push(Player::Eve);
            if game.owner(v) == Player::Eve {
                eve.set(v, arena.edge_of(even.eve_move(v)));
            }
        } else {
            winners.push(Player::Adam);
            if game.owner(v) == Player::Adam {
                adam.set(v, dual_arena.edge_of(odd.eve_move(v)));
            }
        }
    }
    SolveResult {
        winners,
        eve_strategy: complete(game, Player::Eve, eve),
        adam_strategy: complete(game, Player::Adam, adam),
    }
}
