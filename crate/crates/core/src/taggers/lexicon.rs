use std::collections::HashMap;
use std::io::BufRead;

use super::Decision;
use crate::analyzer::AnalyzerTable;
use crate::error::{Error, Result};
use crate::level::ReadabilityLevel;

/// Lemma readability lexicon.
///
/// With `pos_sensitive` set, lookups try `(lemma, pos)` first and fall back
/// to the lemma alone; otherwise only the lemma is used. A lemma listed under
/// several tags resolves to its lowest level.
#[derive(Clone, Debug)]
pub struct Lexicon {
    by_lemma_pos: HashMap<(String, String), ReadabilityLevel>,
    by_lemma: HashMap<String, ReadabilityLevel>,
    pub pos_sensitive: bool,
}

impl Lexicon {
    pub fn from_entries<I>(entries: I, pos_sensitive: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String, ReadabilityLevel)>,
    {
        let mut by_lemma_pos = HashMap::new();
        let mut by_lemma: HashMap<String, ReadabilityLevel> = HashMap::new();
        for (lemma, pos, level) in entries {
            if let Some(previous) = by_lemma_pos.insert((lemma.clone(), pos.clone()), level) {
                if previous != level {
                    return Err(Error::Duplicate(format!("lexicon entry {lemma}/{pos} with levels {previous} and {level}")));
                }
            }
            by_lemma
                .entry(lemma)
                .and_modify(|l| *l = (*l).min(level))
                .or_insert(level);
        }
        Ok(Lexicon { by_lemma_pos, by_lemma, pos_sensitive })
    }

    pub fn len(&self) -> usize {
        self.by_lemma_pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_lemma_pos.is_empty()
    }

    pub fn lookup(&self, lemma: &str, pos: &str) -> Option<ReadabilityLevel> {
        if self.pos_sensitive {
            if let Some(&level) = self.by_lemma_pos.get(&(lemma.to_owned(), pos.to_owned())) {
                return Some(level);
            }
        }
        self.by_lemma.get(lemma).copied()
    }
}

/// `lemma<TAB>pos<TAB>level` with levels 1..=5 (1 and 2 load as 3).
pub fn load_lexicon<R: BufRead>(source: R, pos_sensitive: bool) -> Result<Lexicon> {
    let mut entries = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [lemma, pos, level] = fields[..] else {
            return Err(Error::parse(line_no, format!("expected 3 fields, found {}", fields.len())));
        };
        if lemma.is_empty() {
            return Err(Error::parse(line_no, "empty lemma"));
        }
        let level: ReadabilityLevel = level.parse().map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
        entries.push((lemma.to_owned(), pos.to_owned(), level));
    }
    Lexicon::from_entries(entries, pos_sensitive)
}

/// Looks up every top analysis of `word` and returns the lowest level found.
pub fn lex_tag(lexicon: &Lexicon, analyzer: &AnalyzerTable, word: &str, epsilon: f64) -> Decision {
    analyzer
        .top_analyses(word, epsilon)
        .iter()
        .filter_map(|a| lexicon.lookup(&a.lemma, &a.pos))
        .min()
        .into()
}
