use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::Decision;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::level::ReadabilityLevel;

#[derive(Clone, Debug, PartialEq)]
pub struct MleEntry {
    pub counts: [u64; 3],
    pub level: ReadabilityLevel,
    pub probability: f64,
    pub total: u64,
}

impl MleEntry {
    fn from_counts(counts: [u64; 3]) -> Option<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return None;
        }
        // first maximum wins, i.e. the lowest level on ties
        let (index, &best) = counts
            .iter()
            .enumerate()
            .fold((0, &0), |acc, (i, c)| if *c > *acc.1 { (i, c) } else { acc });
        Some(MleEntry {
            counts,
            level: ReadabilityLevel::from_index(index).expect("three levels"),
            probability: best as f64 / total as f64,
            total,
        })
    }

    /// Number of distinct levels the word was seen with.
    pub fn level_count(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Context-free lookup of the level each training word most often carries.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MleTable {
    entries: BTreeMap<String, MleEntry>,
}

impl MleTable {
    pub fn from_counts<I: IntoIterator<Item = (String, [u64; 3])>>(counts: I) -> Self {
        let mut merged: BTreeMap<String, [u64; 3]> = BTreeMap::new();
        for (word, c) in counts {
            let slot = merged.entry(word).or_default();
            for (s, v) in slot.iter_mut().zip(c) {
                *s += v;
            }
        }
        let entries = merged
            .into_iter()
            .filter_map(|(w, c)| MleEntry::from_counts(c).map(|e| (w, e)))
            .collect();
        MleTable { entries }
    }

    pub fn get(&self, word: &str) -> Option<&MleEntry> {
        self.entries.get(word)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &MleEntry)> {
        self.entries.iter().map(|(w, e)| (w.as_str(), e))
    }

    /// Abstains on unseen words and on words whose argmax probability or
    /// total count falls below the thresholds.
    pub fn tag(&self, word: &str, min_prob: f64, min_count: u64) -> Decision {
        match self.entries.get(word) {
            Some(e) if e.probability >= min_prob && e.total >= min_count => Decision::Level(e.level),
            _ => Decision::Abstain,
        }
    }

    /// Fraction of types seen with exactly one level.
    pub fn single_level_fraction(&self) -> f64 {
        if self.entries.is_empty() {
            return 0.0;
        }
        let single = self.entries.values().filter(|e| e.level_count() == 1).count();
        single as f64 / self.entries.len() as f64
    }

    /// Type counts keyed by the set of levels each type was seen with.
    pub fn level_set_breakdown(&self) -> BTreeMap<Vec<ReadabilityLevel>, usize> {
        let mut out = BTreeMap::new();
        for e in self.entries.values() {
            let set: Vec<_> = ReadabilityLevel::ALL.into_iter().filter(|l| e.counts[l.index()] > 0).collect();
            *out.entry(set).or_insert(0) += 1;
        }
        out
    }
}

pub fn build_mle(train: &Corpus) -> Result<MleTable> {
    let mut counts: BTreeMap<String, [u64; 3]> = BTreeMap::new();
    for fragment in train.fragments() {
        for token in fragment.tokens() {
            let level = token.gold_level.ok_or_else(|| {
                Error::MissingGold(format!("token {:?} in {}", token.surface(), fragment.display_key()))
            })?;
            counts.entry(token.surface().to_owned()).or_default()[level.index()] += 1;
        }
    }
    Ok(MleTable::from_counts(counts))
}

/// `word<TAB>count3<TAB>count4<TAB>count5`, sorted by word.
pub fn write_mle<W: Write>(table: &MleTable, mut sink: W) -> Result<()> {
    for (word, e) in &table.entries {
        writeln!(sink, "{word}\t{}\t{}\t{}", e.counts[0], e.counts[1], e.counts[2])?;
    }
    sink.flush()?;
    Ok(())
}

pub fn load_mle<R: BufRead>(source: R) -> Result<MleTable> {
    let mut entries = BTreeMap::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [word, c3, c4, c5] = fields[..] else {
            return Err(Error::parse(line_no, format!("expected 4 fields, found {}", fields.len())));
        };
        let mut counts = [0u64; 3];
        for (slot, raw) in counts.iter_mut().zip([c3, c4, c5]) {
            *slot = raw.parse().map_err(|_| Error::parse(line_no, format!("bad count {raw:?}")))?;
        }
        let entry = MleEntry::from_counts(counts).ok_or_else(|| Error::parse(line_no, "all counts are zero"))?;
        if entries.insert(word.to_owned(), entry).is_some() {
            return Err(Error::parse(line_no, format!("duplicate word {word:?}")));
        }
    }
    Ok(MleTable { entries })
}
