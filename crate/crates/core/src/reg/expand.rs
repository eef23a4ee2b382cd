use std::fmt;

use super::{RegSpec, RegState};
use crate::error::{Error, Result};
use crate::even::{is_even_graph, restrict_by_strategy, EvenCheck};
use crate::explore::{explore, Expansion, Explored};
use crate::game::{EdgeId, ParityGame, SolveResult, Strategy, VertexId};
use crate::index::{Player, Priority};
use crate::solve::{solve, Solver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    /// The owner of the position picks an edge.
    AwaitMove,
    /// Eve picks a register after `edge` was taken.
    AwaitRegister { edge: EdgeId },
    /// Eve picks the recorded odd value for `edge` after picking `register`.
    AwaitEscalation { edge: EdgeId, register: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegConfig {
    pub position: VertexId,
    pub phase: Phase,
    pub state: RegState,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegNode {
    Config(RegConfig),
    /// Eve attempted an output outside `J`.
    Sink,
}

/// Eve's choices, used to build strategy-restricted expansions.
pub trait RegPolicy: Sync {
    fn register(&self, cfg: &RegConfig, edge: EdgeId) -> Result<u32>;

    fn escalation(&self, _cfg: &RegConfig, _edge: EdgeId, observed: Priority) -> Priority {
        observed
    }
}

/// A transduction game expanded into an ordinary parity game.
#[derive(Clone, Debug)]
pub struct RegExpansion {
    pub spec: RegSpec,
    pub game: ParityGame,
    pub nodes: Vec<RegNode>,
}

struct Labelled<'a> {
    spec: &'a RegSpec,
    node: &'a RegNode,
}

impl fmt::Display for Labelled<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            RegNode::Sink => write!(f, "sink"),
            RegNode::Config(c) => {
                let phase = match c.phase {
                    Phase::AwaitMove => "move".to_string(),
                    Phase::AwaitRegister { edge } => format!("register(e{edge})"),
                    Phase::AwaitEscalation { edge, register } => {
                        format!("escalate(e{edge},r{register})")
                    }
                };
                write!(f, "p{} {} [{}]", c.position, phase, self.spec.describe(&c.state))
            }
        }
    }
}

impl RegExpansion {
    pub fn describe(&self, v: VertexId) -> String {
        Labelled {
            spec: &self.spec,
            node: &self.nodes[v],
        }
        .to_string()
    }

    pub fn config(&self, v: VertexId) -> Option<&RegConfig> {
        match &self.nodes[v] {
            RegNode::Config(c) => Some(c),
            RegNode::Sink => None,
        }
    }

    pub fn sink(&self) -> Option<VertexId> {
        self.nodes.iter().position(|n| *n == RegNode::Sink)
    }

    /// `<vertex-id> -> <configuration>` lines.
    pub fn sidecar(&self) -> String {
        crate::format::write_sidecar((0..self.nodes.len()).map(|v| self.describe(v)))
    }
}

fn check_input(g: &ParityGame, spec: &RegSpec) -> Result<()> {
    let (gi, si) = (g.index(), spec.input());
    if !(si.contains(gi.lo()) && si.contains(gi.hi())) {
        return Err(Error::IndexMismatch(format!(
            "game index {gi} is not within the input index {si}"
        )));
    }
    Ok(())
}

fn step(
    g: &ParityGame,
    spec: &RegSpec,
    policy: Option<&dyn RegPolicy>,
    node: &RegNode,
) -> Result<Expansion<RegNode>> {
    let neutral = spec.neutral();
    let cfg = match node {
        RegNode::Sink => return Ok((Player::Adam, vec![(RegNode::Sink, spec.sink_priority())])),
        RegNode::Config(c) => c,
    };
    match cfg.phase {
        Phase::AwaitMove => {
            let succ = g
                .out(cfg.position)
                .iter()
                .map(|&edge| {
                    let next = RegConfig {
                        position: g.edge(edge).dst,
                        phase: Phase::AwaitRegister { edge },
                        state: cfg.state.clone(),
                    };
                    (RegNode::Config(next), neutral)
                })
                .collect();
            Ok((g.owner(cfg.position), succ))
        }
        Phase::AwaitRegister { edge } => {
            let observed = g.edge(edge).priority;
            let registers = match policy {
                Some(p) => vec![p.register(cfg, edge)?],
                None => spec.registers().to_vec(),
            };
            let mut succ = Vec::with_capacity(registers.len());
            for j in registers {
                let out = spec.output(&cfg.state, j)?;
                if out.instant_loss {
                    succ.push((RegNode::Sink, spec.sink_priority()));
                } else if observed.is_multiple_of(2) {
                    let state = spec.update(&out.state, j, observed, observed)?;
                    let next = RegConfig {
                        position: cfg.position,
                        phase: Phase::AwaitMove,
                        state,
                    };
                    succ.push((RegNode::Config(next), out.output));
                } else {
                    let next = RegConfig {
                        position: cfg.position,
                        phase: Phase::AwaitEscalation { edge, register: j },
                        state: out.state,
                    };
                    succ.push((RegNode::Config(next), out.output));
                }
            }
            Ok((Player::Eve, succ))
        }
        Phase::AwaitEscalation { edge, register } => {
            let observed = g.edge(edge).priority;
            let choices = match policy {
                Some(p) => vec![p.escalation(cfg, edge, observed)],
                None => spec.escalations(observed),
            };
            let mut succ = Vec::with_capacity(choices.len());
            for i in choices {
                let state = spec.update(&cfg.state, register, observed, i)?;
                let next = RegConfig {
                    position: cfg.position,
                    phase: Phase::AwaitMove,
                    state,
                };
                succ.push((RegNode::Config(next), neutral));
            }
            Ok((Player::Eve, succ))
        }
    }
}

fn expand_with(
    g: &ParityGame,
    spec: &RegSpec,
    cap: usize,
    policy: Option<&dyn RegPolicy>,
) -> Result<RegExpansion> {
    check_input(g, spec)?;
    let init = RegNode::Config(RegConfig {
        position: g.initial(),
        phase: Phase::AwaitMove,
        state: spec.initial_state(),
    });
    let Explored { game, nodes } =
        explore(init, spec.game_index(), cap, |n| step(g, spec, policy, n))?;
    Ok(RegExpansion {
        spec: spec.clone(),
        game,
        nodes,
    })
}

/// Expands the transduction game played over `g` from its initial vertex.
///
/// Only configurations reachable from the initial one are materialized.
/// Moves of the underlying game and escalations are labelled `min(J)`;
/// register picks carry their output.
pub fn expand_reg(g: &ParityGame, spec: &RegSpec, cap: usize) -> Result<RegExpansion> {
    expand_with(g, spec, cap, None)
}

/// Expansion where Eve's register and escalation choices follow `policy`.
pub fn expand_reg_restricted(
    g: &ParityGame,
    spec: &RegSpec,
    cap: usize,
    policy: &dyn RegPolicy,
) -> Result<RegExpansion> {
    expand_with(g, spec, cap, Some(policy))
}

impl RegExpansion {
    /// Evenness of the expansion once Eve's choices are fixed by construction.
    pub fn eve_choices_even(&self) -> Result<EvenCheck> {
        let mut s = Strategy::empty(Player::Eve, self.game.vertex_count());
        for v in 0..self.game.vertex_count() {
            if self.game.owner(v) == Player::Eve {
                if let [only] = self.game.out(v) {
                    s.set(v, *only);
                } else {
                    return Err(Error::Consistency(format!(
                        "vertex {v} still offers Eve {} choices",
                        self.game.out(v).len()
                    )));
                }
            }
        }
        let g = restrict_by_strategy(&self.game, &s, Player::Eve)?;
        Ok(is_even_graph(&g))
    }
}

/// The expansion, its solution and the winner from the initial configuration.
#[derive(Clone, Debug)]
pub struct RegSolution {
    pub expansion: RegExpansion,
    pub result: SolveResult,
    pub winner: Player,
}

impl RegSolution {
    /// Eve's positional choice at every Eve configuration she wins.
    pub fn eve_choices(&self) -> Vec<(String, String)> {
        let game = &self.expansion.game;
        (0..game.vertex_count())
            .filter(|&v| game.owner(v) == Player::Eve && self.result.winner(v) == Player::Eve)
            .filter_map(|v| {
                let e = self.result.eve_strategy.get(v)?;
                Some((self.expansion.describe(v), self.expansion.describe(game.edge(e).dst)))
            })
            .collect()
    }
}

pub fn solve_reg(g: &ParityGame, spec: &RegSpec, solver: Solver, cap: usize) -> Result<RegSolution> {
    let expansion = expand_reg(g, spec, cap)?;
    let result = solve(&expansion.game, solver);
    let winner = result.winner(expansion.game.initial());
    Ok(RegSolution {
        expansion,
        result,
        winner,
    })
}
