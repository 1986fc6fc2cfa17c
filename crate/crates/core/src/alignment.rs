//! Monotone word alignment between an original fragment and a simplified
//! version, and derivation of word and fragment readability labels from
//! parallel triples.
//!
//! Costs: match 0, insert/delete 1, substitute = character edit distance
//! normalized by the longer surface, so similar words prefer to pair up.

use crate::corpus::{Fragment, ParallelFragment, Token};
use crate::error::{Error, Result};
use crate::level::{max_level, ReadabilityLevel};

const TIE_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlignOp {
    Match,
    Substitute,
    Delete,
    Insert,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlignmentLink {
    pub src_index: Option<usize>,
    pub tgt_index: Option<usize>,
    pub op: AlignOp,
}

/// Levenshtein distance over Unicode scalar values.
pub fn char_edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Cost of pairing two surfaces: 0 when equal, otherwise in (0, 1].
pub fn substitution_cost(a: &str, b: &str) -> f64 {
    if a == b {
        return 0.0;
    }
    let longest = a.chars().count().max(b.chars().count());
    char_edit_distance(a, b) as f64 / longest as f64
}

/// Total cost of an alignment under the module's cost model.
pub fn alignment_cost<S: AsRef<str>>(src: &[S], tgt: &[S], links: &[AlignmentLink]) -> f64 {
    links
        .iter()
        .map(|link| match (link.src_index, link.tgt_index) {
            (Some(i), Some(j)) => substitution_cost(src[i].as_ref(), tgt[j].as_ref()),
            _ => 1.0,
        })
        .sum()
}

/// Minimum-cost monotone alignment.
///
/// Ties are resolved walking left to right, preferring match, then
/// substitute, then delete, then insert.
pub fn align_words<S: AsRef<str>>(src: &[S], tgt: &[S]) -> Result<Vec<AlignmentLink>> {
    if src.is_empty() || tgt.is_empty() {
        return Err(Error::InvalidArgument("alignment needs two non-empty sequences".into()));
    }
    let (n, m) = (src.len(), tgt.len());
    let pair = |i: usize, j: usize| substitution_cost(src[i].as_ref(), tgt[j].as_ref());

    // rest[i][j]: cheapest alignment of src[i..] with tgt[j..]
    let mut rest = vec![vec![0.0f64; m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            rest[i][j] = match (i < n, j < m) {
                (false, false) => 0.0,
                (true, false) => rest[i + 1][j] + 1.0,
                (false, true) => rest[i][j + 1] + 1.0,
                (true, true) => (pair(i, j) + rest[i + 1][j + 1])
                    .min(rest[i + 1][j] + 1.0)
                    .min(rest[i][j + 1] + 1.0),
            };
        }
    }

    let mut links = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let target = rest[i][j];
        if i < n && j < m {
            let c = pair(i, j);
            if (c + rest[i + 1][j + 1] - target).abs() <= TIE_EPS {
                let op = if c == 0.0 { AlignOp::Match } else { AlignOp::Substitute };
                links.push(AlignmentLink { src_index: Some(i), tgt_index: Some(j), op });
                i += 1;
                j += 1;
                continue;
            }
        }
        if i < n && (j == m || (1.0 + rest[i + 1][j] - target).abs() <= TIE_EPS) {
            links.push(AlignmentLink { src_index: Some(i), tgt_index: None, op: AlignOp::Delete });
            i += 1;
        } else {
            links.push(AlignmentLink { src_index: None, tgt_index: Some(j), op: AlignOp::Insert });
            j += 1;
        }
    }
    Ok(links)
}

/// For each source position, whether it is aligned to an identical target
/// token.
pub fn unchanged_mask<S: AsRef<str>>(src: &[S], tgt: &[S]) -> Result<Vec<bool>> {
    let mut mask = vec![false; src.len()];
    for link in align_words(src, tgt)? {
        if let (AlignOp::Match, Some(i)) = (link.op, link.src_index) {
            mask[i] = true;
        }
    }
    Ok(mask)
}

/// A parallel triple with labels derived for each original token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledParallel {
    pub parallel: ParallelFragment,
    pub word_labels: Vec<ReadabilityLevel>,
    pub fragment_label: ReadabilityLevel,
}

impl LabeledParallel {
    /// The original fragment carrying the derived word and fragment levels.
    pub fn to_fragment(&self) -> Fragment {
        let original = &self.parallel.original;
        let tokens = original
            .tokens()
            .iter()
            .zip(&self.word_labels)
            .map(|(t, &level)| Token::new(t.surface(), Some(level)).expect("surface already validated"))
            .collect();
        Fragment::new(original.doc_id(), original.frag_id(), tokens, Some(self.fragment_label))
            .expect("fragment level is the max of its word levels")
    }
}

/// Labels each original word with the lowest level at which it survives
/// unchanged: 3 if unchanged in both simplified versions, 4 if unchanged only
/// in the level-4 version, 5 otherwise.
pub fn derive_word_labels(parallel: &ParallelFragment) -> Result<LabeledParallel> {
    let original: Vec<&str> = parallel.original.surfaces().collect();
    let level4: Vec<&str> = parallel.level4.surfaces().collect();
    let level3: Vec<&str> = parallel.level3.surfaces().collect();
    let kept4 = unchanged_mask(&original, &level4)?;
    let kept3 = unchanged_mask(&original, &level3)?;
    let word_labels: Vec<ReadabilityLevel> = kept4
        .iter()
        .zip(&kept3)
        .map(|(&in4, &in3)| match (in4, in3) {
            (false, _) => ReadabilityLevel::L5,
            (true, false) => ReadabilityLevel::L4,
            (true, true) => ReadabilityLevel::L3,
        })
        .collect();
    let fragment_label = derive_fragment_label(&word_labels)?;
    Ok(LabeledParallel { parallel: parallel.clone(), word_labels, fragment_label })
}

pub fn derive_fragment_label(word_labels: &[ReadabilityLevel]) -> Result<ReadabilityLevel> {
    max_level(word_labels.iter().copied()).ok_or(Error::Empty("no word labels"))
}
