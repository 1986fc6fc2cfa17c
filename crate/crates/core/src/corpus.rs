//! Leveled and parallel corpora, their line-record file formats, and level
//! distribution statistics.
//!
//! Labeled file, one fragment per line:
//!
//! ```text
//! doc_id<TAB>frag_id<TAB>tok[|level] tok[|level] ...[<TAB>fragment_level]
//! ```
//!
//! Parallel file, one record per line:
//!
//! ```text
//! doc_id<TAB>frag_id<TAB>original<TAB>level4<TAB>level3
//! ```
//!
//! Input is expected to be tokenized already; tokens are split on single
//! spaces and never re-segmented.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};

use num_traits::Float;

use crate::error::{Error, Result};
use crate::level::{max_level, ReadabilityLevel};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Dev,
    Test,
    #[default]
    Unsplit,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
            Split::Unsplit => "unsplit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    surface: String,
    pub gold_level: Option<ReadabilityLevel>,
}

impl Token {
    /// Surfaces must be non-empty and free of whitespace. `|` is reserved
    /// as the level separator of the file format.
    pub fn new(surface: impl Into<String>, gold_level: Option<ReadabilityLevel>) -> Result<Self> {
        let surface = surface.into();
        if surface.is_empty() {
            return Err(Error::InvalidToken(surface, "empty surface"));
        }
        if surface.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(surface, "surface contains whitespace"));
        }
        if surface.contains('|') {
            return Err(Error::InvalidToken(surface, "surface contains '|'"));
        }
        Ok(Token { surface, gold_level })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    doc_id: String,
    frag_id: String,
    tokens: Vec<Token>,
    gold_level: Option<ReadabilityLevel>,
}

fn check_id(id: &str, what: &'static str) -> Result<()> {
    if id.is_empty() || id.contains(['\t', '\n', '\r']) {
        return Err(Error::InvalidArgument(format!("invalid {what} {id:?}")));
    }
    Ok(())
}

impl Fragment {
    pub fn new(
        doc_id: impl Into<String>,
        frag_id: impl Into<String>,
        tokens: Vec<Token>,
        gold_level: Option<ReadabilityLevel>,
    ) -> Result<Self> {
        let doc_id = doc_id.into();
        let frag_id = frag_id.into();
        check_id(&doc_id, "doc_id")?;
        check_id(&frag_id, "frag_id")?;
        let key = format!("{doc_id}/{frag_id}");
        if tokens.is_empty() {
            return Err(Error::EmptyFragment(key));
        }
        if let (Some(declared), Some(derived)) = (gold_level, max_token_level(&tokens)) {
            if declared != derived {
                return Err(Error::InconsistentFragment {
                    key,
                    message: format!(
                        "fragment level {declared} differs from max word level {derived}"
                    ),
                });
            }
        }
        Ok(Fragment { doc_id, frag_id, tokens, gold_level })
    }

    /// Unlabeled fragment from surfaces.
    pub fn from_surfaces<S: AsRef<str>>(
        doc_id: impl Into<String>,
        frag_id: impl Into<String>,
        surfaces: &[S],
    ) -> Result<Self> {
        let tokens = surfaces
            .iter()
            .map(|s| Token::new(s.as_ref(), None))
            .collect::<Result<Vec<_>>>()?;
        Fragment::new(doc_id, frag_id, tokens, None)
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn frag_id(&self) -> &str {
        &self.frag_id
    }

    pub fn key(&self) -> (&str, &str) {
        (&self.doc_id, &self.frag_id)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(Token::surface)
    }

    /// The fragment level as written in the file, if any.
    pub fn declared_level(&self) -> Option<ReadabilityLevel> {
        self.gold_level
    }

    /// Declared fragment level, or else the max word level when every token
    /// is labeled.
    pub fn gold_level(&self) -> Option<ReadabilityLevel> {
        self.gold_level.or_else(|| max_token_level(&self.tokens))
    }

    /// Word gold levels, `None` if any token is unlabeled.
    pub fn word_levels(&self) -> Option<Vec<ReadabilityLevel>> {
        self.tokens.iter().map(|t| t.gold_level).collect()
    }

    pub(crate) fn display_key(&self) -> String {
        format!("{}/{}", self.doc_id, self.frag_id)
    }
}

/// Max over token levels when all tokens are labeled.
fn max_token_level(tokens: &[Token]) -> Option<ReadabilityLevel> {
    tokens
        .iter()
        .map(|t| t.gold_level)
        .collect::<Option<Vec<_>>>()
        .and_then(max_level)
}

/// An original fragment with its two simplified versions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelFragment {
    pub original: Fragment,
    pub level4: Fragment,
    pub level3: Fragment,
}

impl ParallelFragment {
    pub fn new(original: Fragment, level4: Fragment, level3: Fragment) -> Result<Self> {
        for version in [&level4, &level3] {
            if version.key() != original.key() {
                return Err(Error::InconsistentFragment {
                    key: original.display_key(),
                    message: format!("parallel version has key {}", version.display_key()),
                });
            }
        }
        Ok(ParallelFragment { original, level4, level3 })
    }

    pub fn key(&self) -> (&str, &str) {
        self.original.key()
    }
}

fn check_unique<'a, I: Iterator<Item = (&'a str, &'a str)>>(keys: I) -> Result<()> {
    let mut seen = HashSet::new();
    for (doc, frag) in keys {
        if !seen.insert((doc, frag)) {
            return Err(Error::Duplicate(format!("{doc}/{frag}")));
        }
    }
    Ok(())
}

/// A corpus of single-version fragments (labeled or not).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub split: Split,
    fragments: Vec<Fragment>,
}

impl Corpus {
    pub fn new(split: Split, fragments: Vec<Fragment>) -> Result<Self> {
        check_unique(fragments.iter().map(Fragment::key))?;
        Ok(Corpus { split, fragments })
    }

    pub fn with_split(mut self, split: Split) -> Self {
        self.split = split;
        self
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn token_count(&self) -> usize {
        self.fragments.iter().map(Fragment::len).sum()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.fragments.iter().flat_map(|f| f.tokens.iter())
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParallelCorpus {
    pub split: Split,
    fragments: Vec<ParallelFragment>,
}

impl ParallelCorpus {
    pub fn new(split: Split, fragments: Vec<ParallelFragment>) -> Result<Self> {
        check_unique(fragments.iter().map(ParallelFragment::key))?;
        Ok(ParallelCorpus { split, fragments })
    }

    pub fn fragments(&self) -> &[ParallelFragment] {
        &self.fragments
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusKind {
    Labeled,
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedCorpus {
    Labeled(Corpus),
    Parallel(ParallelCorpus),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Fold Alif variants (أ إ آ ٱ → ا), Alif Maqsura (ى → ي) and Ta Marbuta
    /// (ة → ه) in token surfaces. Off by default.
    pub normalize: bool,
}

/// Orthographic folding applied when [`ParseOptions::normalize`] is set.
pub fn normalize_surface(surface: &str) -> String {
    surface
        .chars()
        .map(|c| match c {
            'أ' | 'إ' | 'آ' | 'ٱ' => 'ا',
            'ى' => 'ي',
            'ة' => 'ه',
            other => other,
        })
        .collect()
}

pub fn parse_corpus<R: BufRead>(source: R, kind: CorpusKind, options: ParseOptions) -> Result<ParsedCorpus> {
    Ok(match kind {
        CorpusKind::Labeled => ParsedCorpus::Labeled(parse_labeled(source, options)?),
        CorpusKind::Parallel => ParsedCorpus::Parallel(parse_parallel(source, options)?),
    })
}

fn parse_level_field(field: &str, line: usize) -> Result<ReadabilityLevel> {
    let value: i64 = field
        .parse()
        .map_err(|_| Error::parse(line, format!("level {field:?} is not an integer")))?;
    ReadabilityLevel::from_scale(value).map_err(|e| Error::parse(line, e.to_string()))
}

fn parse_tokens(field: &str, line: usize, labeled: bool, options: ParseOptions) -> Result<Vec<Token>> {
    if field.is_empty() {
        return Err(Error::parse(line, "empty token list"));
    }
    field
        .split(' ')
        .map(|raw| {
            let (surface, level) = match raw.rsplit_once('|') {
                Some((surface, level)) if labeled => (surface, Some(parse_level_field(level, line)?)),
                _ => (raw, None),
            };
            let surface = if options.normalize { normalize_surface(surface) } else { surface.to_owned() };
            Token::new(surface, level).map_err(|e| Error::parse(line, e.to_string()))
        })
        .collect()
}

fn lines<R: BufRead>(source: R) -> impl Iterator<Item = (usize, Result<String>)> {
    source
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.map_err(Error::from)))
        .filter(|(_, l)| !matches!(l, Ok(s) if s.is_empty()))
}

fn at_line(line: usize, err: Error) -> Error {
    match err {
        e @ Error::Parse { .. } => e,
        other => Error::parse(line, other.to_string()),
    }
}

pub fn parse_labeled<R: BufRead>(source: R, options: ParseOptions) -> Result<Corpus> {
    let mut fragments = Vec::new();
    let mut seen = HashSet::new();
    for (line_no, line) in lines(source) {
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(Error::parse(line_no, format!("expected 3 or 4 tab-separated fields, found {}", fields.len())));
        }
        let tokens = parse_tokens(fields[2], line_no, true, options)?;
        let gold = match fields.get(3) {
            Some(f) => Some(parse_level_field(f, line_no)?),
            None => None,
        };
        let fragment = Fragment::new(fields[0], fields[1], tokens, gold).map_err(|e| at_line(line_no, e))?;
        if !seen.insert((fields[0].to_owned(), fields[1].to_owned())) {
            return Err(Error::parse(line_no, format!("duplicate fragment {}/{}", fields[0], fields[1])));
        }
        fragments.push(fragment);
    }
    Ok(Corpus { split: Split::Unsplit, fragments })
}

pub fn parse_parallel<R: BufRead>(source: R, options: ParseOptions) -> Result<ParallelCorpus> {
    let mut fragments = Vec::new();
    let mut seen = HashSet::new();
    for (line_no, line) in lines(source) {
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 5 {
            return Err(Error::parse(line_no, format!("expected 5 tab-separated fields, found {}", fields.len())));
        }
        let version = |field: &str| -> Result<Fragment> {
            let tokens = parse_tokens(field, line_no, false, options)?;
            Fragment::new(fields[0], fields[1], tokens, None).map_err(|e| at_line(line_no, e))
        };
        let parallel = ParallelFragment::new(version(fields[2])?, version(fields[3])?, version(fields[4])?)
            .map_err(|e| at_line(line_no, e))?;
        if !seen.insert((fields[0].to_owned(), fields[1].to_owned())) {
            return Err(Error::parse(line_no, format!("duplicate fragment {}/{}", fields[0], fields[1])));
        }
        fragments.push(parallel);
    }
    Ok(ParallelCorpus { split: Split::Unsplit, fragments })
}

fn write_tokens<W: Write>(sink: &mut W, tokens: &[Token], with_levels: bool) -> Result<()> {
    for (i, token) in tokens.iter().enumerate() {
        if i > 0 {
            sink.write_all(b" ")?;
        }
        sink.write_all(token.surface.as_bytes())?;
        if let (true, Some(level)) = (with_levels, token.gold_level) {
            write!(sink, "|{level}")?;
        }
    }
    Ok(())
}

/// Writes a labeled corpus; absent levels are omitted.
pub fn write_corpus<W: Write>(corpus: &Corpus, mut sink: W) -> Result<()> {
    for fragment in &corpus.fragments {
        write!(sink, "{}\t{}\t", fragment.doc_id, fragment.frag_id)?;
        write_tokens(&mut sink, &fragment.tokens, true)?;
        if let Some(level) = fragment.gold_level {
            write!(sink, "\t{level}")?;
        }
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(())
}

pub fn write_parallel<W: Write>(corpus: &ParallelCorpus, mut sink: W) -> Result<()> {
    for p in &corpus.fragments {
        write!(sink, "{}\t{}", p.original.doc_id, p.original.frag_id)?;
        for version in [&p.original, &p.level4, &p.level3] {
            sink.write_all(b"\t")?;
            write_tokens(&mut sink, &version.tokens, false)?;
        }
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(())
}

/// Per-level token and fragment counts with their fractions.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelDistributionOf<F> {
    pub token_counts: [usize; 3],
    pub fragment_counts: [usize; 3],
    pub token_fractions: [F; 3],
    pub fragment_fractions: [F; 3],
}

impl<F: Float> LevelDistributionOf<F> {
    pub fn token_total(&self) -> usize {
        self.token_counts.iter().sum()
    }

    pub fn fragment_total(&self) -> usize {
        self.fragment_counts.iter().sum()
    }
}

pub(crate) fn fractions<F: Float>(counts: &[usize; 3]) -> [F; 3] {
    let total: usize = counts.iter().sum();
    let total = F::from(total).expect("count fits float");
    counts.map(|c| F::from(c).expect("count fits float") / total)
}

/// Level distribution of a fully labeled corpus.
pub fn corpus_stats<F: Float>(corpus: &Corpus) -> Result<LevelDistributionOf<F>> {
    if corpus.fragments.is_empty() {
        return Err(Error::Empty("corpus has no fragments"));
    }
    let mut token_counts = [0usize; 3];
    let mut fragment_counts = [0usize; 3];
    for fragment in &corpus.fragments {
        for token in &fragment.tokens {
            let level = token.gold_level.ok_or_else(|| {
                Error::MissingGold(format!("token {:?} in {}", token.surface, fragment.display_key()))
            })?;
            token_counts[level.index()] += 1;
        }
        let level = fragment
            .gold_level()
            .ok_or_else(|| Error::MissingGold(format!("fragment {}", fragment.display_key())))?;
        fragment_counts[level.index()] += 1;
    }
    Ok(LevelDistributionOf {
        token_counts,
        fragment_counts,
        token_fractions: fractions(&token_counts),
        fragment_fractions: fractions(&fragment_counts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ReadabilityLevel::*;

    fn parse(text: &str) -> Result<Corpus> {
        parse_labeled(text.as_bytes(), ParseOptions::default())
    }

    #[test]
    fn parses_fragment_levels() {
        let c = parse("d1\tf1\ta b\t3\nd1\tf2\tc\t5\n").unwrap();
        assert_eq!(c.fragments().len(), 2);
        assert_eq!(c.fragments()[0].gold_level(), Some(L3));
        assert_eq!(c.fragments()[1].gold_level(), Some(L5));
        assert_eq!(c.token_count(), 3);
    }

    #[test]
    fn clamps_token_level_two() {
        let c = parse("d\tf\tx|2 y|5\n").unwrap();
        assert_eq!(c.fragments()[0].tokens()[0].gold_level, Some(L3));
        assert_eq!(c.fragments()[0].gold_level(), Some(L5));
    }

    #[test]
    fn empty_token_list_reports_line() {
        let err = parse("d\tf1\ta\nd\tf2\t\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn rejects_bad_levels_and_duplicates() {
        assert!(matches!(parse("d\tf\ta|7\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("d\tf\ta|x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("d\tf\ta\t0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("d\tf\ta\nd\tf\tb\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("d\tf\ta|3 b|4\t3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("d\tf\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn absent_levels_are_omitted_on_write() {
        let c = parse("d\tf\ta b|4\n").unwrap();
        let mut out = Vec::new();
        write_corpus(&c, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "d\tf\ta b|4\n");
    }

    #[test]
    fn order_is_preserved() {
        let a = parse("d\t1\tx|3\nd\t2\ty|4\n").unwrap();
        let b = parse("d\t2\ty|4\nd\t1\tx|3\n").unwrap();
        let (mut wa, mut wb) = (Vec::new(), Vec::new());
        write_corpus(&a, &mut wa).unwrap();
        write_corpus(&b, &mut wb).unwrap();
        assert_ne!(wa, wb);
        let mut la: Vec<_> = wa.split(|&c| c == b'\n').collect();
        let mut lb: Vec<_> = wb.split(|&c| c == b'\n').collect();
        la.sort();
        lb.sort();
        assert_eq!(la, lb);
    }

    #[test]
    fn parallel_round_trip() {
        let text = "d\tf\ta b c\ta c\ta\n";
        let p = parse_parallel(text.as_bytes(), ParseOptions::default()).unwrap();
        assert_eq!(p.fragments()[0].level4.len(), 2);
        let mut out = Vec::new();
        write_parallel(&p, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
        assert!(parse_parallel("d\tf\ta\tb\n".as_bytes(), ParseOptions::default()).is_err());
    }

    #[test]
    fn parallel_versions_must_share_keys() {
        let a = Fragment::from_surfaces("d", "f", &["a"]).unwrap();
        let b = Fragment::from_surfaces("e", "f", &["a"]).unwrap();
        assert!(ParallelFragment::new(a.clone(), b, a.clone()).is_err());
    }

    #[test]
    fn normalization_is_opt_in() {
        let text = "d\tf\tأحمد|3\n";
        let plain = parse(text).unwrap();
        assert_eq!(plain.fragments()[0].tokens()[0].surface(), "أحمد");
        let folded = parse_labeled(text.as_bytes(), ParseOptions { normalize: true }).unwrap();
        assert_eq!(folded.fragments()[0].tokens()[0].surface(), "احمد");
    }

    #[test]
    fn stats_fractions() {
        let mut text = String::new();
        for (i, level) in std::iter::repeat_n(3, 865).chain(std::iter::repeat_n(4, 90)).chain(std::iter::repeat_n(5, 45)).enumerate() {
            text.push_str(&format!("d\t{i}\tw|{level}\n"));
        }
        let stats = corpus_stats::<f64>(&parse(&text).unwrap()).unwrap();
        assert_eq!(stats.token_counts, [865, 90, 45]);
        assert!((stats.token_fractions[0] - 0.865).abs() < 1e-12);
        assert!((stats.token_fractions[1] - 0.090).abs() < 1e-12);
        assert!((stats.token_fractions[2] - 0.045).abs() < 1e-12);
        assert!((stats.token_fractions.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn stats_single_token_and_missing_gold() {
        let stats = corpus_stats::<f32>(&parse("d\tf\tw|5\n").unwrap()).unwrap();
        assert_eq!(stats.token_fractions, [0.0, 0.0, 1.0]);
        assert!(matches!(corpus_stats::<f64>(&parse("d\tf\tw\n").unwrap()), Err(Error::MissingGold(_))));
    }
}
