//! The three-valued readability scale.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Readability level of a word or fragment, ordered `L3 < L4 < L5`.
///
/// The source scale runs from 1 to 5; levels 1 and 2 are folded into
/// level 3 when a value enters the toolkit, so only three values exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReadabilityLevel {
    L3,
    L4,
    L5,
}

impl ReadabilityLevel {
    pub const ALL: [ReadabilityLevel; 3] = [Self::L3, Self::L4, Self::L5];

    /// Converts a 1..=5 scale value, clamping 1 and 2 to level 3.
    pub fn from_scale(value: i64) -> Result<Self> {
        match value {
            1..=3 => Ok(Self::L3),
            4 => Ok(Self::L4),
            5 => Ok(Self::L5),
            other => Err(Error::InvalidLevel(other)),
        }
    }

    pub fn value(self) -> u8 {
        match self {
            Self::L3 => 3,
            Self::L4 => 4,
            Self::L5 => 5,
        }
    }

    /// Dense index 0..3, used for per-level arrays.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }
}

impl fmt::Display for ReadabilityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for ReadabilityLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("not a readability level: {s:?}")))?;
        Self::from_scale(value)
    }
}

/// Maximum level of a sequence, `None` when empty.
pub fn max_level<I: IntoIterator<Item = ReadabilityLevel>>(levels: I) -> Option<ReadabilityLevel> {
    levels.into_iter().max()
}
