//! Priority transduction games: registers plus bounded counters.
//!
//! Eve maps the priorities of an underlying game into an output index `J`
//! on the fly. Registers `r_j` exist for every even `2j` in `J`, plus `r_0`
//! when `1` is in `J`. Counters `c_{i,j}` exist for every odd input
//! priority `i` and register `j` and range over `0..=N`.

mod expand;
pub mod lehtinen;

pub use expand::{
    expand_reg, expand_reg_restricted, solve_reg, Phase, RegConfig, RegExpansion, RegNode,
    RegPolicy, RegSolution,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{Priority, PriorityIndex};

/// Which value of `r_j` selects the counters reset below register `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResetReading {
    /// `c_{r_j, j'} := 0` with `r_j` read before the register update.
    #[default]
    Pre,
    /// `c_{i, j'} := 0`, i.e. `r_j` read after it was set to `i`.
    Post,
}

impl fmt::Display for ResetReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResetReading::Pre => write!(f, "pre"),
            ResetReading::Post => write!(f, "post"),
        }
    }
}

impl FromStr for ResetReading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pre" => Ok(ResetReading::Pre),
            "post" => Ok(ResetReading::Post),
            other => Err(Error::InvalidIndex(format!(
                "reset reading must be `pre` or `post`, found `{other}`"
            ))),
        }
    }
}

/// Parameters of a transduction game: input index `I`, output index `J`
/// and counter bound `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegSpec {
    input: PriorityIndex,
    output: PriorityIndex,
    bound: u32,
    reset: ResetReading,
    registers: Vec<u32>,
    odd_inputs: Vec<Priority>,
}

/// Register valuation and counter matrix. Layout is owned by a [`RegSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegState {
    registers: Vec<Priority>,
    counters: Vec<u32>,
}

/// Result of picking a register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegOutput {
    pub output: Priority,
    pub state: RegState,
    pub instant_loss: bool,
}

impl RegSpec {
    pub fn new(input: PriorityIndex, output: PriorityIndex, bound: u32) -> Result<Self> {
        if !matches!(output.lo(), 1 | 2) {
            return Err(Error::InvalidIndex(format!(
                "output index {output} must start at 1 or 2"
            )));
        }
        let mut registers: Vec<u32> = Vec::new();
        if output.contains(1) {
            registers.push(0);
        }
        registers.extend(output.iter().filter(|p| p % 2 == 0).map(|p| p / 2));
        Ok(RegSpec {
            input,
            output,
            bound,
            reset: ResetReading::Pre,
            registers,
            odd_inputs: input.odd().collect(),
        })
    }

    pub fn with_reset(mut self, reset: ResetReading) -> Self {
        self.reset = reset;
        self
    }

    pub fn input(&self) -> PriorityIndex {
        self.input
    }

    pub fn output_index(&self) -> PriorityIndex {
        self.output
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn reset(&self) -> ResetReading {
        self.reset
    }

    /// Register indices in ascending order.
    pub fn registers(&self) -> &[u32] {
        &self.registers
    }

    pub fn odd_inputs(&self) -> &[Priority] {
        &self.odd_inputs
    }

    fn slot(&self, j: u32) -> Result<usize> {
        self.registers
            .binary_search(&j)
            .map_err(|_| Error::UnknownRegister(j))
    }

    fn counter_slot(&self, i: Priority, slot: usize) -> Option<usize> {
        let k = self.odd_inputs.binary_search(&i).ok()?;
        Some(k * self.registers.len() + slot)
    }

    /// Counters at zero, registers at `min(I)`.
    pub fn initial_state(&self) -> RegState {
        RegState {
            registers: vec![self.input.lo(); self.registers.len()],
            counters: vec![0; self.odd_inputs.len() * self.registers.len()],
        }
    }

    /// Builds a state from explicit register values and non-zero counters.
    pub fn state(&self, registers: &[(u32, Priority)], counters: &[((Priority, u32), u32)]) -> Result<RegState> {
        let mut s = self.initial_state();
        for &(j, v) in registers {
            if !self.input.contains(v) {
                return Err(Error::InputOutOfIndex(v));
            }
            s.registers[self.slot(j)?] = v;
        }
        for &((i, j), c) in counters {
            let slot = self.slot(j)?;
            let k = self.counter_slot(i, slot).ok_or(Error::InputOutOfIndex(i))?;
            s.counters[k] = c.min(self.bound);
        }
        Ok(s)
    }

    pub fn register_value(&self, s: &RegState, j: u32) -> Result<Priority> {
        Ok(s.registers[self.slot(j)?])
    }

    /// Counter `c_{i,j}`; zero for even `i`, which has no counter.
    pub fn counter(&self, s: &RegState, i: Priority, j: u32) -> Result<u32> {
        let slot = self.slot(j)?;
        Ok(self.counter_slot(i, slot).map_or(0, |k| s.counters[k]))
    }

    /// Eve picks register `j`: the output and the counter side effect.
    pub fn output(&self, s: &RegState, j: u32) -> Result<RegOutput> {
        let slot = self.slot(j)?;
        if j == 0 {
            return Ok(RegOutput {
                output: 1,
                state: s.clone(),
                instant_loss: false,
            });
        }
        let value = s.registers[slot];
        if value.is_multiple_of(2) {
            return Ok(RegOutput {
                output: 2 * j,
                state: s.clone(),
                instant_loss: false,
            });
        }
        let k = self
            .counter_slot(value, slot)
            .expect("odd register value lies in the input index");
        let mut next = s.clone();
        if s.counters[k] >= self.bound {
            next.counters[k] = 0;
            Ok(RegOutput {
                output: 2 * j + 1,
                state: next,
                instant_loss: !self.output.contains(2 * j + 1),
            })
        } else {
            next.counters[k] += 1;
            Ok(RegOutput {
                output: 2 * j,
                state: next,
                instant_loss: false,
            })
        }
    }

    /// Values Eve may record after observing `observed`: the priority itself
    /// when even, otherwise any odd priority of `I` at least as large.
    pub fn escalations(&self, observed: Priority) -> Vec<Priority> {
        if observed.is_multiple_of(2) {
            vec![observed]
        } else {
            self.odd_inputs.iter().copied().filter(|&i| i >= observed).collect()
        }
    }

    /// Counter resets then register updates after picking `j` and recording `chosen`.
    pub fn update(&self, s: &RegState, j: u32, observed: Priority, chosen: Priority) -> Result<RegState> {
        let slot = self.slot(j)?;
        for p in [observed, chosen] {
            if !self.input.contains(p) {
                return Err(Error::InputOutOfIndex(p));
            }
        }
        let legal = if observed.is_multiple_of(2) {
            chosen == observed
        } else {
            chosen % 2 == 1 && chosen >= observed
        };
        if !legal {
            return Err(Error::SharpChoice { observed, chosen });
        }

        let n = self.registers.len();
        let mut next = s.clone();
        for (k, &i) in self.odd_inputs.iter().enumerate() {
            if i < chosen {
                next.counters[k * n + slot] = 0;
            }
        }
        let pivot = match self.reset {
            ResetReading::Pre => s.registers[slot],
            ResetReading::Post => chosen,
        };
        if let Ok(k) = self.odd_inputs.binary_search(&pivot) {
            for lower in 0..slot {
                next.counters[k * n + lower] = 0;
            }
        }
        for higher in slot + 1..n {
            next.registers[higher] = next.registers[higher].max(chosen);
        }
        next.registers[slot] = chosen;
        Ok(next)
    }

    /// Label of moves that produce no output.
    pub fn neutral(&self) -> Priority {
        self.output.lo()
    }

    /// Odd self-loop priority of the instant-loss sink: the least odd
    /// priority not below `min(J)`. Lies outside `J` only when `J = [2, 2]`.
    pub fn sink_priority(&self) -> Priority {
        self.output.lo() | 1
    }

    /// Index of expanded games and composed automata.
    pub fn game_index(&self) -> PriorityIndex {
        PriorityIndex::new(self.output.lo(), self.output.hi().max(self.sink_priority()))
            .expect("non-empty")
    }

    /// Short deterministic rendering of a state.
    pub fn describe(&self, s: &RegState) -> String {
        let regs: Vec<String> = self
            .registers
            .iter()
            .zip(&s.registers)
            .map(|(j, v)| format!("r{j}={v}"))
            .collect();
        let mut out = regs.join(",");
        let n = self.registers.len();
        let counters: Vec<String> = s
            .counters
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, c)| format!("c{},{}={c}", self.odd_inputs[k / n], self.registers[k % n]))
            .collect();
        if !counters.is_empty() {
            out.push(';');
            out.push_str(&counters.join(","));
        }
        out
    }
}

impl fmt::Display for RegSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Reg(I={}, J={}, N={}, reset={})",
            self.input, self.output, self.bound, self.reset
        )
    }
}
