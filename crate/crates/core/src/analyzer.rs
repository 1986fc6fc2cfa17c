//! Precomputed morphological analyses: surface word → ranked
//! (lemma, POS, log-probability) candidates.
//!
//! The table is produced offline by an external analyzer/disambiguator and
//! loaded from `surface<TAB>lemma<TAB>pos<TAB>logprob` rows.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use crate::error::{Error, Result};

/// Default width of the band below the best log-probability that still
/// counts as a top analysis.
pub const DEFAULT_TOP_EPSILON: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub lemma: String,
    pub pos: String,
    pub logprob: f64,
}

#[derive(Clone, Debug, Default)]
pub struct AnalyzerTable {
    entries: HashMap<String, Vec<Analysis>>,
}

impl AnalyzerTable {
    /// Builds a table from `(surface, analysis)` pairs. Each word's list is
    /// sorted by descending log-probability, keeping input order on ties.
    pub fn from_rows<I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Analysis)>,
    {
        let mut entries: HashMap<String, Vec<Analysis>> = HashMap::new();
        let mut seen = HashSet::new();
        for (surface, analysis) in rows {
            validate(&surface, &analysis)?;
            if !seen.insert((surface.clone(), analysis.lemma.clone(), analysis.pos.clone())) {
                return Err(Error::Duplicate(format!("analysis {surface}/{}/{}", analysis.lemma, analysis.pos)));
            }
            entries.entry(surface).or_default().push(analysis);
        }
        for list in entries.values_mut() {
            list.sort_by(|a, b| b.logprob.total_cmp(&a.logprob));
        }
        Ok(AnalyzerTable { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn analyze(&self, word: &str) -> Option<&[Analysis]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    /// Analyses whose log-probability lies within `epsilon` of the best one.
    pub fn top_analyses(&self, word: &str, epsilon: f64) -> &[Analysis] {
        match self.entries.get(word) {
            Some(list) => {
                let best = list[0].logprob;
                let n = list.iter().take_while(|a| best - a.logprob <= epsilon).count();
                &list[..n]
            }
            None => &[],
        }
    }
}

fn validate(surface: &str, analysis: &Analysis) -> Result<()> {
    if surface.is_empty() {
        return Err(Error::InvalidArgument("empty surface in analyzer table".into()));
    }
    if analysis.lemma.is_empty() {
        return Err(Error::InvalidArgument(format!("empty lemma for {surface:?}")));
    }
    if analysis.logprob.is_nan() || analysis.logprob > 0.0 {
        return Err(Error::InvalidArgument(format!(
            "log-probability {} for {surface:?} must be <= 0",
            analysis.logprob
        )));
    }
    Ok(())
}

pub fn load_analyzer<R: BufRead>(source: R) -> Result<AnalyzerTable> {
    let mut rows = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [surface, lemma, pos, logprob] = fields[..] else {
            return Err(Error::parse(line_no, format!("expected 4 fields, found {}", fields.len())));
        };
        let logprob: f64 = logprob
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad log-probability {logprob:?}")))?;
        let analysis = Analysis { lemma: lemma.to_owned(), pos: pos.to_owned(), logprob };
        validate(surface, &analysis).map_err(|e| Error::parse(line_no, e.to_string()))?;
        rows.push((surface.to_owned(), analysis));
    }
    AnalyzerTable::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let t = load_analyzer("kataba\tkatab\tverb\t-0.5\n".as_bytes()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.analyze("kataba").unwrap().len(), 1);
        assert!(t.analyze("qara").is_none());
    }

    #[test]
    fn sorted_descending_with_stable_ties() {
        let t = load_analyzer("w\ta\tn\t-2\nw\tb\tn\t-1\nw\tc\tv\t-1\n".as_bytes()).unwrap();
        let lemmas: Vec<_> = t.analyze("w").unwrap().iter().map(|a| a.lemma.as_str()).collect();
        assert_eq!(lemmas, ["b", "c", "a"]);
        let top: Vec<_> = t.top_analyses("w", DEFAULT_TOP_EPSILON).iter().map(|a| a.lemma.as_str()).collect();
        assert_eq!(top, ["b", "c"]);
        assert_eq!(t.top_analyses("w", 1.5).len(), 3);
        assert!(t.top_analyses("unknown", 1.0).is_empty());
    }

    #[test]
    fn errors() {
        assert!(matches!(load_analyzer("w\ta\tn\t-1\nw\ta\tn\t-2\n".as_bytes()), Err(Error::Duplicate(_))));
        assert!(matches!(load_analyzer("w\ta\tn\t0.3\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_analyzer("w\ta\tn\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_analyzer("w\t\tn\t-1\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn lookups_are_repeatable() {
        let t = load_analyzer("w\ta\tn\t-1\n".as_bytes()).unwrap();
        assert_eq!(t.analyze("w"), t.analyze("w"));
    }
}
