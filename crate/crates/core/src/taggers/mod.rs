//! Word-level readability taggers. Each one either assigns a level or
//! abstains, leaving the word to a later layer of a cascade.

mod external;
mod freq;
mod lexicon;
mod mle;

pub use external::{import_subword_predictions, PredictionMap};
pub use freq::{
    build_dist_freq, build_ex_freq, load_bin_table, load_frequency_list, write_bin_table, Bin, BinScheme,
    BinTable, FrequencyList, MassMode, DEFAULT_EX_FREQ_BINS,
};
pub use lexicon::{lex_tag, load_lexicon, Lexicon};
pub use mle::{build_mle, load_mle, write_mle, MleEntry, MleTable};

use crate::level::ReadabilityLevel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Level(ReadabilityLevel),
    Abstain,
}

impl Decision {
    pub fn level(self) -> Option<ReadabilityLevel> {
        match self {
            Decision::Level(level) => Some(level),
            Decision::Abstain => None,
        }
    }

    pub fn is_abstain(self) -> bool {
        self == Decision::Abstain
    }
}

impl From<Option<ReadabilityLevel>> for Decision {
    fn from(level: Option<ReadabilityLevel>) -> Self {
        level.map_or(Decision::Abstain, Decision::Level)
    }
}

/// Position of a word inside its fragment. Only the external tagger looks
/// past `surface`.
#[derive(Clone, Copy, Debug)]
pub struct WordContext<'a> {
    pub doc_id: &'a str,
    pub frag_id: &'a str,
    pub index: usize,
    pub surface: &'a str,
}

pub fn default_tag(level: ReadabilityLevel) -> Decision {
    Decision::Level(level)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_never_abstains() {
        for level in ReadabilityLevel::ALL {
            assert_eq!(default_tag(level), Decision::Level(level));
            assert!(!default_tag(level).is_abstain());
        }
    }
}
