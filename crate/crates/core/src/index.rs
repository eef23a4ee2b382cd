use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Priority = u32;

/// The two players. Eve wins plays whose limsup priority is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }

    /// The player who wins when `p` is the limsup priority.
    pub fn favoured_by(p: Priority) -> Player {
        if p.is_multiple_of(2) {
            Player::Eve
        } else {
            Player::Adam
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Eve => write!(f, "Eve"),
            Player::Adam => write!(f, "Adam"),
        }
    }
}

/// A non-empty contiguous range `[lo, hi]` of priorities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Priority; 2]", into = "[Priority; 2]")]
pub struct PriorityIndex {
    lo: Priority,
    hi: Priority,
}

impl PriorityIndex {
    pub fn new(lo: Priority, hi: Priority) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidIndex(format!("[{lo}, {hi}] is empty")));
        }
        Ok(PriorityIndex { lo, hi })
    }

    pub fn lo(&self) -> Priority {
        self.lo
    }

    pub fn hi(&self) -> Priority {
        self.hi
    }

    pub fn contains(&self, p: Priority) -> bool {
        self.lo <= p && p <= self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = Priority> + Clone {
        self.lo..=self.hi
    }

    pub fn odd(&self) -> impl Iterator<Item = Priority> + Clone {
        self.iter().filter(|p| p % 2 == 1)
    }

    /// Smallest index containing both.
    pub fn hull(&self, other: &PriorityIndex) -> PriorityIndex {
        PriorityIndex {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn covering(priorities: impl IntoIterator<Item = Priority>) -> Option<PriorityIndex> {
        let mut it = priorities.into_iter();
        let first = it.next()?;
        let (lo, hi) = it.fold((first, first), |(lo, hi), p| (lo.min(p), hi.max(p)));
        Some(PriorityIndex { lo, hi })
    }
}

impl TryFrom<[Priority; 2]> for PriorityIndex {
    type Error = Error;

    fn try_from(v: [Priority; 2]) -> Result<Self> {
        PriorityIndex::new(v[0], v[1])
    }
}

impl From<PriorityIndex> for [Priority; 2] {
    fn from(i: PriorityIndex) -> Self {
        [i.lo, i.hi]
    }
}

impl fmt::Display for PriorityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Accepts `lo..hi`, `lo,hi` or `[lo, hi]`.
impl FromStr for PriorityIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let (a, b) = t
            .split_once("..")
            .or_else(|| t.split_once(','))
            .ok_or_else(|| Error::InvalidIndex(format!("cannot parse `{s}`")))?;
        let parse = |x: &str| {
            x.trim()
                .trim_start_matches('=')
                .parse::<Priority>()
                .map_err(|_| Error::InvalidIndex(format!("cannot parse `{s}`")))
        };
        PriorityIndex::new(parse(a)?, parse(b)?)
    }
}
