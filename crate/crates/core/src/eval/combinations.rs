use std::fmt;

use num_traits::Float;

use super::{gold_fragment, gold_words, pair_with_gold, Prediction};
use crate::corpus::Corpus;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WordErrorBucket {
    Zero,
    One,
    Two,
    ThreePlus,
}

impl WordErrorBucket {
    pub const ALL: [WordErrorBucket; 4] = [Self::Zero, Self::One, Self::Two, Self::ThreePlus];

    pub fn of(errors: usize) -> Self {
        match errors {
            0 => Self::Zero,
            1 => Self::One,
            2 => Self::Two,
            _ => Self::ThreePlus,
        }
    }
}

impl fmt::Display for WordErrorBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Zero => "0",
            Self::One => "1",
            Self::Two => "2",
            Self::ThreePlus => "3+",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorComboRowOf<F> {
    pub fragment_correct: bool,
    pub bucket: WordErrorBucket,
    pub count: usize,
    /// Percentage of all fragments.
    pub fraction: F,
}

/// Fragments bucketed by whether their label is right and by how many of
/// their words are wrong. Always holds all eight rows, correct ones first.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorCombinationTableOf<F> {
    pub rows: Vec<ErrorComboRowOf<F>>,
    pub total: usize,
}

impl<F: Float> ErrorCombinationTableOf<F> {
    pub fn count(&self, fragment_correct: bool, bucket: WordErrorBucket) -> usize {
        self.rows
            .iter()
            .find(|r| r.fragment_correct == fragment_correct && r.bucket == bucket)
            .map_or(0, |r| r.count)
    }
}

pub fn error_combinations<F: Float, P: Prediction>(preds: &[P], gold: &Corpus) -> Result<ErrorCombinationTableOf<F>> {
    let mut counts = [[0usize; 4]; 2];
    let mut total = 0;
    for (p, g) in pair_with_gold(preds, gold)? {
        let words = p
            .predicted_words()
            .ok_or_else(|| Error::Coverage(format!("prediction for {} lacks word levels", g.display_key())))?;
        let errors = words.iter().zip(gold_words(g)?).filter(|(p, g)| **p != *g).count();
        let correct = p.predicted_fragment() == Some(gold_fragment(g)?);
        counts[usize::from(!correct)][WordErrorBucket::of(errors) as usize] += 1;
        total += 1;
    }
    let hundred = F::from(100).unwrap();
    let rows = [true, false]
        .into_iter()
        .flat_map(|correct| {
            WordErrorBucket::ALL.into_iter().map(move |bucket| {
                let count = counts[usize::from(!correct)][bucket as usize];
                let fraction = if total == 0 {
                    F::zero()
                } else {
                    hundred * F::from(count).unwrap() / F::from(total).unwrap()
                };
                ErrorComboRowOf { fragment_correct: correct, bucket, count, fraction }
            })
        })
        .collect();
    Ok(ErrorCombinationTableOf { rows, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{TagTrace, WordDecision};
    use crate::corpus::{parse_labeled, ParseOptions};
    use crate::level::ReadabilityLevel::{self, *};

    fn trace(frag: &str, words: &[(&str, ReadabilityLevel)]) -> TagTrace {
        TagTrace::new(
            "d",
            frag,
            words.iter().map(|(s, l)| WordDecision { surface: s.to_string(), level: *l, layer: 0 }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn all_correct() {
        let gold = parse_labeled("d\t1\ta|3 b|4\n".as_bytes(), ParseOptions::default()).unwrap();
        let t: ErrorCombinationTableOf<f64> = error_combinations(gold.fragments(), &gold).unwrap();
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.count(true, WordErrorBucket::Zero), 1);
        assert_eq!(t.rows[0].fraction, 100.0);
    }

    #[test]
    fn buckets() {
        let gold = parse_labeled(
            "d\t1\ta|3 b|3 c|3 e|3\nd\t2\tx|3 y|4\n".as_bytes(),
            ParseOptions::default(),
        )
        .unwrap();
        let preds = [
            trace("1", &[("a", L4), ("b", L5), ("c", L4), ("e", L3)]),
            // the wrongly raised 3-word hides behind the correct 4-word
            trace("2", &[("x", L4), ("y", L4)]),
        ];
        let t: ErrorCombinationTableOf<f64> = error_combinations(&preds, &gold).unwrap();
        assert_eq!(t.count(false, WordErrorBucket::ThreePlus), 1);
        assert_eq!(t.count(true, WordErrorBucket::One), 1);
        assert_eq!(t.count(false, WordErrorBucket::Zero), 0);
        assert_eq!(t.rows.iter().map(|r| r.count).sum::<usize>(), 2);
    }
}
