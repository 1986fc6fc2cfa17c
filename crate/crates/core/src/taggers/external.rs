use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::BufRead;

use super::{Decision, WordContext};
use crate::corpus::Fragment;
use crate::error::{Error, Result};
use crate::level::ReadabilityLevel;

/// Word-level predictions imported from an external subword classifier,
/// keyed by `(doc_id, frag_id)` then word position.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PredictionMap {
    fragments: HashMap<(String, String), BTreeMap<usize, ReadabilityLevel>>,
}

impl PredictionMap {
    /// Folds subword rows into word levels; a word takes the highest level
    /// among its subwords.
    pub fn from_subwords<I>(rows: I) -> Self
    where
        I: IntoIterator<Item = (String, String, usize, ReadabilityLevel)>,
    {
        let mut fragments: HashMap<(String, String), BTreeMap<usize, ReadabilityLevel>> = HashMap::new();
        for (doc, frag, word, level) in rows {
            fragments
                .entry((doc, frag))
                .or_default()
                .entry(word)
                .and_modify(|l| *l = (*l).max(level))
                .or_insert(level);
        }
        PredictionMap { fragments }
    }

    pub fn get(&self, doc_id: &str, frag_id: &str, index: usize) -> Option<ReadabilityLevel> {
        self.fragments
            .get(&(doc_id.to_owned(), frag_id.to_owned()))
            .and_then(|words| words.get(&index))
            .copied()
    }

    pub fn tag(&self, ctx: &WordContext<'_>) -> Decision {
        self.get(ctx.doc_id, ctx.frag_id, ctx.index).into()
    }

    /// Fails when a prediction points past the end of `fragment`.
    pub fn check_fragment(&self, fragment: &Fragment) -> Result<()> {
        let key = (fragment.doc_id().to_owned(), fragment.frag_id().to_owned());
        if let Some((&index, _)) = self.fragments.get(&key).and_then(|w| w.last_key_value()) {
            if index >= fragment.len() {
                return Err(Error::PredictionOutOfRange { key: fragment.display_key(), index, len: fragment.len() });
            }
        }
        Ok(())
    }

    pub fn word_count(&self) -> usize {
        self.fragments.values().map(BTreeMap::len).sum()
    }
}

/// Reads `doc_id<TAB>frag_id<TAB>word_index<TAB>subword_index<TAB>level` rows.
pub fn import_subword_predictions<R: BufRead>(source: R) -> Result<PredictionMap> {
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [doc, frag, word, subword, level] = fields[..] else {
            return Err(Error::parse(line_no, format!("expected 5 fields, found {}", fields.len())));
        };
        let word: usize = word.parse().map_err(|_| Error::parse(line_no, format!("bad word index {word:?}")))?;
        let subword: usize = subword
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad subword index {subword:?}")))?;
        let level: ReadabilityLevel = level.parse().map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
        if !seen.insert((doc.to_owned(), frag.to_owned(), word, subword)) {
            return Err(Error::parse(line_no, "duplicate subword row"));
        }
        rows.push((doc.to_owned(), frag.to_owned(), word, level));
    }
    Ok(PredictionMap::from_subwords(rows))
}
