//! Frequency-binning taggers over a rank-sorted type frequency list.
//!
//! * Dist-Freq: three contiguous bins whose mass shares mirror a target level
//!   distribution (most frequent types easiest).
//! * Ex-Freq: many bins of equal cumulative mass, each labeled with the
//!   majority level of the training tokens that fall in it.
//!
//! Types missing from the list get `unseen_level` (5).

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use num_traits::Float;

use super::Decision;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::level::ReadabilityLevel;

pub const DEFAULT_EX_FREQ_BINS: usize = 10_000;

/// Type counts sorted by count descending, then type ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequencyList {
    entries: Vec<(String, u64)>,
}

impl FrequencyList {
    pub fn new(mut entries: Vec<(String, u64)>) -> Result<Self> {
        if let Some((word, _)) = entries.iter().find(|(_, c)| *c == 0) {
            return Err(Error::InvalidArgument(format!("type {word:?} has zero count")));
        }
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        if let Some(pair) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Duplicate(format!("frequency type {:?}", pair[0].0)));
        }
        Ok(FrequencyList { entries })
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_mass(&self) -> u128 {
        self.entries.iter().map(|(_, c)| u128::from(*c)).sum()
    }
}

/// `type<TAB>count` rows in any order.
pub fn load_frequency_list<R: BufRead>(source: R) -> Result<FrequencyList> {
    let mut entries = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let Some((word, count)) = line.split_once('\t') else {
            return Err(Error::parse(line_no, "expected type<TAB>count"));
        };
        let count: u64 = count
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad count {count:?}")))?;
        if word.is_empty() || count == 0 {
            return Err(Error::parse(line_no, "empty type or zero count"));
        }
        entries.push((word.to_owned(), count));
    }
    FrequencyList::new(entries)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinScheme {
    Dist,
    Ex,
}

impl fmt::Display for BinScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinScheme::Dist => "dist",
            BinScheme::Ex => "ex",
        })
    }
}

impl FromStr for BinScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dist" => Ok(BinScheme::Dist),
            "ex" => Ok(BinScheme::Ex),
            other => Err(Error::InvalidArgument(format!("unknown bin scheme {other:?}"))),
        }
    }
}

/// What "mass" means when Dist-Freq walks the list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MassMode {
    /// Token mass: each type weighs its corpus count.
    #[default]
    Tokens,
    /// Type mass: every type weighs 1.
    Types,
}

/// A contiguous rank range `[start, end)` of the frequency list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bin {
    pub index: usize,
    pub start: usize,
    pub end: usize,
    pub level: ReadabilityLevel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinTable {
    scheme: BinScheme,
    num_bins: usize,
    unseen_level: ReadabilityLevel,
    bins: Vec<Bin>,
    list: FrequencyList,
    lookup: HashMap<String, ReadabilityLevel>,
}

impl BinTable {
    /// `bins` holds the non-empty bins in rank order and must cover the list
    /// exactly; `num_bins` is the nominal bin count.
    pub fn new(
        scheme: BinScheme,
        num_bins: usize,
        list: FrequencyList,
        bins: Vec<Bin>,
        unseen_level: ReadabilityLevel,
    ) -> Result<Self> {
        let mut next_start = 0;
        let mut last_index = None;
        for bin in &bins {
            if bin.start != next_start || bin.end <= bin.start || bin.index >= num_bins {
                return Err(Error::InvalidArgument(format!("bin {} does not continue the partition", bin.index)));
            }
            if last_index.is_some_and(|i| bin.index <= i) {
                return Err(Error::InvalidArgument(format!("bin index {} out of order", bin.index)));
            }
            last_index = Some(bin.index);
            next_start = bin.end;
        }
        if next_start != list.len() {
            return Err(Error::InvalidArgument("bins do not cover the frequency list".into()));
        }
        let mut lookup = HashMap::with_capacity(list.len());
        for bin in &bins {
            for (word, _) in &list.entries[bin.start..bin.end] {
                lookup.insert(word.clone(), bin.level);
            }
        }
        Ok(BinTable { scheme, num_bins, unseen_level, bins, list, lookup })
    }

    pub fn scheme(&self) -> BinScheme {
        self.scheme
    }

    pub fn num_bins(&self) -> usize {
        self.num_bins
    }

    pub fn unseen_level(&self) -> ReadabilityLevel {
        self.unseen_level
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    pub fn frequency_list(&self) -> &FrequencyList {
        &self.list
    }

    pub fn level_of(&self, word: &str) -> ReadabilityLevel {
        self.lookup.get(word).copied().unwrap_or(self.unseen_level)
    }

    /// Never abstains.
    pub fn tag(&self, word: &str) -> Decision {
        Decision::Level(self.level_of(word))
    }

    /// Number of types assigned to each level.
    pub fn type_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for bin in &self.bins {
            counts[bin.level.index()] += bin.end - bin.start;
        }
        counts
    }
}

/// Three bins mirroring `fractions` (for levels 3, 4, 5) of the list's
/// mass. A type whose mass straddles a level boundary stays in the earlier
/// (easier) bin.
pub fn build_dist_freq<F: Float>(freq: &FrequencyList, fractions: [F; 3], mode: MassMode) -> Result<BinTable> {
    if freq.is_empty() {
        return Err(Error::Empty("frequency list"));
    }
    let tol = F::from(1e-9).unwrap().max(F::epsilon() * F::from(16).unwrap());
    let sum = fractions[0] + fractions[1] + fractions[2];
    if fractions.iter().any(|f| !f.is_finite() || *f < F::zero()) || (sum - F::one()).abs() > tol {
        return Err(Error::InvalidArgument("level fractions must be non-negative and sum to 1".into()));
    }
    let weight = |count: u64| match mode {
        MassMode::Tokens => F::from(count).unwrap(),
        MassMode::Types => F::one(),
    };
    let total = freq.entries.iter().fold(F::zero(), |acc, (_, c)| acc + weight(*c));
    let slack = total * tol;
    let bounds = [fractions[0] * total, (fractions[0] + fractions[1]) * total];

    let mut levels = Vec::with_capacity(freq.len());
    let mut cumulative = F::zero();
    for (_, count) in &freq.entries {
        let level = if cumulative < bounds[0] - slack {
            ReadabilityLevel::L3
        } else if cumulative < bounds[1] - slack {
            ReadabilityLevel::L4
        } else {
            ReadabilityLevel::L5
        };
        levels.push(level);
        cumulative = cumulative + weight(*count);
    }
    let bins = runs(&levels, |level| level.index(), |level| level);
    BinTable::new(BinScheme::Dist, 3, freq.clone(), bins, ReadabilityLevel::L5)
}

/// Groups consecutive equal keys into bins.
fn runs<T: Copy>(items: &[T], index: impl Fn(T) -> usize, level: impl Fn(T) -> ReadabilityLevel) -> Vec<Bin> {
    let mut bins: Vec<Bin> = Vec::new();
    for (rank, &item) in items.iter().enumerate() {
        match bins.last_mut() {
            Some(bin) if bin.index == index(item) => bin.end = rank + 1,
            _ => bins.push(Bin { index: index(item), start: rank, end: rank + 1, level: level(item) }),
        }
    }
    bins
}

/// Bin index of every rank for `num_bins` bins of equal cumulative mass.
///
/// Each cut is placed at the type boundary whose cumulative mass is closest
/// to its target; on a tie the straddling type joins the earlier bin.
pub(crate) fn equal_mass_assignment(counts: &[u64], num_bins: usize) -> Vec<usize> {
    let mut cumulative = Vec::with_capacity(counts.len() + 1);
    cumulative.push(0u128);
    for &c in counts {
        cumulative.push(cumulative.last().unwrap() + u128::from(c));
    }
    let total = *cumulative.last().unwrap();
    let nb = num_bins as u128;
    // cut k is the number of types before bin k + 1
    let cuts: Vec<usize> = (1..num_bins as u128)
        .map(|k| {
            // compare cum * nb with k * total to stay in integers
            let goal = k * total;
            let hi = cumulative.partition_point(|&c| c * nb < goal);
            if hi == 0 {
                return 0;
            }
            if hi == cumulative.len() {
                return counts.len();
            }
            let below = goal - cumulative[hi - 1] * nb;
            let above = cumulative[hi] * nb - goal;
            if above <= below {
                hi
            } else {
                hi - 1
            }
        })
        .collect();
    let mut bin = 0;
    (0..counts.len())
        .map(|rank| {
            while bin < cuts.len() && cuts[bin] <= rank {
                bin += 1;
            }
            bin
        })
        .collect()
}

/// Equal-mass bins labeled by the majority training level of their types.
///
/// Ties in the majority go to the lower level. Bins without training tokens
/// copy the nearest labeled bin, preferring the more frequent side on ties.
pub fn build_ex_freq(freq: &FrequencyList, train: &Corpus, num_bins: usize) -> Result<BinTable> {
    if num_bins == 0 {
        return Err(Error::InvalidArgument("num_bins must be at least 1".into()));
    }
    if freq.is_empty() {
        return Err(Error::Empty("frequency list"));
    }
    if train.token_count() == 0 {
        return Err(Error::Empty("training corpus"));
    }
    let counts: Vec<u64> = freq.entries.iter().map(|(_, c)| *c).collect();
    let assignment = equal_mass_assignment(&counts, num_bins);
    let rank_of: HashMap<&str, usize> = freq.entries.iter().enumerate().map(|(r, (w, _))| (w.as_str(), r)).collect();

    let mut votes = vec![[0u64; 3]; num_bins];
    for fragment in train.fragments() {
        for token in fragment.tokens() {
            let level = token.gold_level.ok_or_else(|| {
                Error::MissingGold(format!("token {:?} in {}", token.surface(), fragment.display_key()))
            })?;
            if let Some(&rank) = rank_of.get(token.surface()) {
                votes[assignment[rank]][level.index()] += 1;
            }
        }
    }
    let majority: Vec<Option<ReadabilityLevel>> = votes
        .iter()
        .map(|v| {
            let best = *v.iter().max().unwrap();
            (best > 0).then(|| ReadabilityLevel::from_index(v.iter().position(|&c| c == best).unwrap()).unwrap())
        })
        .collect();
    let labeled: Vec<usize> = (0..num_bins).filter(|&b| majority[b].is_some()).collect();
    if labeled.is_empty() {
        return Err(Error::InvalidArgument("no training token occurs in the frequency list".into()));
    }
    let resolve = |bin: usize| -> ReadabilityLevel {
        if let Some(level) = majority[bin] {
            return level;
        }
        let after = labeled.partition_point(|&b| b < bin);
        let nearest = match (after.checked_sub(1).map(|i| labeled[i]), labeled.get(after)) {
            (Some(lo), Some(&hi)) => if bin - lo <= hi - bin { lo } else { hi },
            (Some(lo), None) => lo,
            (None, Some(&hi)) => hi,
            (None, None) => unreachable!("at least one labeled bin"),
        };
        majority[nearest].unwrap()
    };
    let bins = runs(&assignment, |b| b, resolve);
    BinTable::new(BinScheme::Ex, num_bins, freq.clone(), bins, ReadabilityLevel::L5)
}

/// Header `# scheme=<dist|ex> bins=<n> unseen=<level>`, then one
/// `type<TAB>count<TAB>bin<TAB>level` row per type in rank order.
pub fn write_bin_table<W: Write>(table: &BinTable, mut sink: W) -> Result<()> {
    writeln!(sink, "# scheme={} bins={} unseen={}", table.scheme, table.num_bins, table.unseen_level)?;
    for bin in &table.bins {
        for (word, count) in &table.list.entries[bin.start..bin.end] {
            writeln!(sink, "{word}\t{count}\t{}\t{}", bin.index, bin.level)?;
        }
    }
    sink.flush()?;
    Ok(())
}

pub fn load_bin_table<R: BufRead>(source: R) -> Result<BinTable> {
    let mut lines = source.lines();
    let header = lines.next().ok_or(Error::Empty("bin table"))??;
    let mut scheme = None;
    let mut num_bins = None;
    let mut unseen = None;
    for field in header.strip_prefix("# ").ok_or_else(|| Error::parse(1, "missing bin table header"))?.split(' ') {
        let (key, value) = field.split_once('=').ok_or_else(|| Error::parse(1, format!("bad header field {field:?}")))?;
        let bad = |e: Error| Error::parse(1, e.to_string());
        match key {
            "scheme" => scheme = Some(value.parse::<BinScheme>().map_err(bad)?),
            "bins" => num_bins = Some(value.parse::<usize>().map_err(|_| Error::parse(1, "bad bin count"))?),
            "unseen" => unseen = Some(value.parse::<ReadabilityLevel>().map_err(bad)?),
            other => return Err(Error::parse(1, format!("unknown header key {other:?}"))),
        }
    }
    let (Some(scheme), Some(num_bins), Some(unseen)) = (scheme, num_bins, unseen) else {
        return Err(Error::parse(1, "header needs scheme, bins and unseen"));
    };

    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [word, count, bin, level] = fields[..] else {
            return Err(Error::parse(line_no, format!("expected 4 fields, found {}", fields.len())));
        };
        let count: u64 = count.parse().map_err(|_| Error::parse(line_no, "bad count"))?;
        let bin: usize = bin.parse().map_err(|_| Error::parse(line_no, "bad bin index"))?;
        let level: ReadabilityLevel = level.parse().map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
        entries.push((word.to_owned(), count));
        rows.push((bin, level, line_no));
    }
    let list = FrequencyList::new(entries.clone())?;
    if list.entries != entries {
        return Err(Error::InvalidArgument("bin table rows are not in frequency rank order".into()));
    }
    let mut bins: Vec<Bin> = Vec::new();
    for (rank, &(index, level, line_no)) in rows.iter().enumerate() {
        match bins.last_mut() {
            Some(bin) if bin.index == index => {
                if bin.level != level {
                    return Err(Error::parse(line_no, format!("bin {index} carries two levels")));
                }
                bin.end = rank + 1;
            }
            _ => bins.push(Bin { index, start: rank, end: rank + 1, level }),
        }
    }
    BinTable::new(scheme, num_bins, list, bins, unseen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_labeled, ParseOptions};
    use ReadabilityLevel::*;

    fn list(rows: &[(&str, u64)]) -> FrequencyList {
        FrequencyList::new(rows.iter().map(|(w, c)| (w.to_string(), *c)).collect()).unwrap()
    }

    fn uniform(n: usize) -> FrequencyList {
        FrequencyList::new((0..n).map(|i| (format!("t{i:05}"), 7)).collect()).unwrap()
    }

    #[test]
    fn frequency_list_sorting() {
        let l = list(&[("b", 2), ("a", 2), ("c", 5)]);
        let words: Vec<_> = l.entries().iter().map(|(w, _)| w.as_str()).collect();
        assert_eq!(words, ["c", "a", "b"]);
        assert!(FrequencyList::new(vec![("a".into(), 1), ("a".into(), 2)]).is_err());
        assert!(load_frequency_list("a\t0\n".as_bytes()).is_err());
        assert!(load_frequency_list("a 3\n".as_bytes()).is_err());
    }

    #[test]
    fn dist_freq_uniform_counts() {
        let t = build_dist_freq(&uniform(1000), [0.865, 0.090, 0.045], MassMode::Tokens).unwrap();
        assert_eq!(t.type_counts(), [865, 90, 45]);
        let t32 = build_dist_freq(&uniform(1000), [0.865f32, 0.090, 0.045], MassMode::Tokens).unwrap();
        assert_eq!(t32.type_counts(), [865, 90, 45]);
    }

    #[test]
    fn dist_freq_single_type_is_easy() {
        let t = build_dist_freq(&list(&[("a", 10)]), [0.865, 0.09, 0.045], MassMode::Tokens).unwrap();
        assert_eq!(t.level_of("a"), L3);
        assert_eq!(t.level_of("zzz"), L5);
    }

    #[test]
    fn dist_freq_mass_modes_differ() {
        // one dominant type holds 90% of the mass
        let l = list(&[("a", 90), ("b", 5), ("c", 3), ("d", 2)]);
        let tokens = build_dist_freq(&l, [0.5, 0.25, 0.25], MassMode::Tokens).unwrap();
        assert_eq!(["a", "b", "c", "d"].map(|w| tokens.level_of(w)), [L3, L5, L5, L5]);
        let types = build_dist_freq(&l, [0.5, 0.25, 0.25], MassMode::Types).unwrap();
        assert_eq!(["a", "b", "c", "d"].map(|w| types.level_of(w)), [L3, L3, L4, L5]);
    }

    #[test]
    fn dist_freq_rejects_bad_fractions() {
        assert!(build_dist_freq(&uniform(3), [0.5, 0.5, 0.5], MassMode::Tokens).is_err());
        assert!(build_dist_freq(&FrequencyList::default(), [1.0, 0.0, 0.0], MassMode::Tokens).is_err());
    }

    #[test]
    fn equal_mass_cuts() {
        // 4,3,2,1 into two bins: cutting after the first type misses the
        // midpoint by 1, after the second by 2
        assert_eq!(equal_mass_assignment(&[4, 3, 2, 1], 2), vec![0, 1, 1, 1]);
        assert_eq!(equal_mass_assignment(&[3, 2, 3, 2], 2), vec![0, 0, 1, 1]);
        // tie: the straddling type stays in the earlier bin
        assert_eq!(equal_mass_assignment(&[2, 2, 2], 2), vec![0, 0, 1]);
        assert_eq!(equal_mass_assignment(&[1, 1, 1], 1), vec![0, 0, 0]);
        // dominant head leaves some bins empty
        assert_eq!(equal_mass_assignment(&[100, 1, 1], 4), vec![1, 3, 3]);
    }

    fn train(text: &str) -> Corpus {
        parse_labeled(text.as_bytes(), ParseOptions::default()).unwrap()
    }

    #[test]
    fn ex_freq_single_bin_is_global_majority() {
        let l = list(&[("a", 4), ("b", 3), ("c", 2), ("d", 1)]);
        let c = train("x\t1\ta|4 b|4 c|3\nx\t2\td|5\n");
        let t = build_ex_freq(&l, &c, 1).unwrap();
        for w in ["a", "b", "c", "d"] {
            assert_eq!(t.level_of(w), L4);
        }
        assert_eq!(t.level_of("unseen"), L5);
    }

    #[test]
    fn ex_freq_majority_and_nearest_fill() {
        // counts 1 each: four bins of one type
        let l = list(&[("a", 1), ("b", 1), ("c", 1), ("d", 1)]);
        let c = train("x\t1\ta|3 a|3 a|5 d|5\n");
        let t = build_ex_freq(&l, &c, 4).unwrap();
        // b and c fall in unlabeled bins and copy their nearest neighbour
        assert_eq!(["a", "b", "c", "d"].map(|w| t.level_of(w)), [L3, L3, L5, L5]);
        let l2 = list(&[("a", 1), ("b", 1), ("c", 1)]);
        let t2 = build_ex_freq(&l2, &train("x\t1\ta|4 c|5\n"), 3).unwrap();
        // bin 1 is one away from both; the more frequent side wins
        assert_eq!(t2.level_of("b"), L4);
    }

    #[test]
    fn ex_freq_errors() {
        let l = list(&[("a", 1)]);
        assert!(build_ex_freq(&l, &train("x\t1\ta|3\n"), 0).is_err());
        assert!(build_ex_freq(&l, &Corpus::default(), 1).is_err());
        assert!(build_ex_freq(&l, &train("x\t1\tz|3\n"), 1).is_err());
        assert!(build_ex_freq(&l, &train("x\t1\ta\n"), 1).is_err());
    }

    #[test]
    fn bin_table_round_trip() {
        let l = list(&[("a", 9), ("b", 4), ("c", 4), ("d", 1)]);
        let t = build_ex_freq(&l, &train("x\t1\ta|3 b|4 d|5\n"), 3).unwrap();
        let mut out = Vec::new();
        write_bin_table(&t, &mut out).unwrap();
        let back = load_bin_table(out.as_slice()).unwrap();
        assert_eq!(back, t);
        let mut again = Vec::new();
        write_bin_table(&back, &mut again).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn bin_table_load_errors() {
        assert!(load_bin_table("a\t1\t0\t3\n".as_bytes()).is_err());
        assert!(load_bin_table("# scheme=ex bins=2 unseen=5\nb\t1\t0\t3\na\t5\t1\t4\n".as_bytes()).is_err());
        assert!(load_bin_table("# scheme=ex bins=1 unseen=5\na\t5\t0\t3\nb\t1\t0\t4\n".as_bytes()).is_err());
    }
}
