//! Word- and fragment-level scoring of cascade output against gold corpora,
//! per-layer error accounting, and fragment/word error combinations.

mod combinations;
mod format;
mod layers;
mod metrics;

pub use combinations::{error_combinations, ErrorComboRowOf, ErrorCombinationTableOf, WordErrorBucket};
pub use format::{
    display_percent, parse_reports_tsv, render_error_combinations, render_layers, render_model_rows, render_reports,
    ModelRowOf, OutputFormat,
};
pub use layers::{layer_decomposition, LayerDecompositionOf, LayerStatsOf};
pub use metrics::{confusion, report, ConfusionMatrix, EvalReportOf};

use std::collections::HashMap;
use std::str::FromStr;

use num_traits::Float;

use crate::cascade::TagTrace;
use crate::corpus::{Corpus, Fragment};
use crate::error::{Error, Result};
use crate::level::ReadabilityLevel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Granularity {
    Word,
    Fragment,
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "word" => Ok(Granularity::Word),
            "fragment" => Ok(Granularity::Fragment),
            other => Err(Error::InvalidArgument(format!("unknown granularity {other:?}"))),
        }
    }
}

/// Anything that carries predicted levels for a keyed fragment.
pub trait Prediction {
    fn key(&self) -> (&str, &str);
    fn surfaces(&self) -> Vec<&str>;
    fn predicted_words(&self) -> Option<Vec<ReadabilityLevel>>;
    fn predicted_fragment(&self) -> Option<ReadabilityLevel>;
}

impl Prediction for TagTrace {
    fn key(&self) -> (&str, &str) {
        (&self.doc_id, &self.frag_id)
    }

    fn surfaces(&self) -> Vec<&str> {
        self.words.iter().map(|w| w.surface.as_str()).collect()
    }

    fn predicted_words(&self) -> Option<Vec<ReadabilityLevel>> {
        Some(self.word_levels())
    }

    fn predicted_fragment(&self) -> Option<ReadabilityLevel> {
        Some(self.fragment_level)
    }
}

impl Prediction for Fragment {
    fn key(&self) -> (&str, &str) {
        Fragment::key(self)
    }

    fn surfaces(&self) -> Vec<&str> {
        Fragment::surfaces(self).collect()
    }

    fn predicted_words(&self) -> Option<Vec<ReadabilityLevel>> {
        self.word_levels()
    }

    fn predicted_fragment(&self) -> Option<ReadabilityLevel> {
        self.gold_level()
    }
}

/// Predictions paired with their gold fragments, in gold corpus order.
///
/// Every gold fragment must have exactly one prediction over the same
/// tokens, and vice versa.
pub fn pair_with_gold<'a, P: Prediction>(preds: &'a [P], gold: &'a Corpus) -> Result<Vec<(&'a P, &'a Fragment)>> {
    let mut by_key: HashMap<(&str, &str), &P> = HashMap::with_capacity(preds.len());
    for p in preds {
        if by_key.insert(p.key(), p).is_some() {
            let (d, f) = p.key();
            return Err(Error::Coverage(format!("fragment {d}/{f} predicted twice")));
        }
    }
    let mut pairs = Vec::with_capacity(gold.fragments().len());
    for g in gold.fragments() {
        let p = by_key
            .remove(&g.key())
            .ok_or_else(|| Error::Coverage(format!("no prediction for fragment {}", g.display_key())))?;
        let surfaces: Vec<&str> = g.surfaces().collect();
        if p.surfaces() != surfaces {
            return Err(Error::Coverage(format!("tokens of fragment {} differ from gold", g.display_key())));
        }
        pairs.push((p, g));
    }
    if let Some(((d, f), _)) = by_key.into_iter().next() {
        return Err(Error::Coverage(format!("prediction for {d}/{f} has no gold fragment")));
    }
    Ok(pairs)
}

pub(crate) fn gold_words(g: &Fragment) -> Result<Vec<ReadabilityLevel>> {
    g.word_levels()
        .ok_or_else(|| Error::MissingGold(format!("word labels of {}", g.display_key())))
}

pub(crate) fn gold_fragment(g: &Fragment) -> Result<ReadabilityLevel> {
    g.gold_level()
        .ok_or_else(|| Error::MissingGold(format!("fragment label of {}", g.display_key())))
}

fn predicted_words<P: Prediction>(p: &P, g: &Fragment) -> Result<Vec<ReadabilityLevel>> {
    p.predicted_words()
        .ok_or_else(|| Error::Coverage(format!("prediction for {} lacks word levels", g.display_key())))
}

pub fn confusion_for<P: Prediction>(preds: &[P], gold: &Corpus, granularity: Granularity) -> Result<ConfusionMatrix> {
    let mut m = ConfusionMatrix::default();
    for (p, g) in pair_with_gold(preds, gold)? {
        match granularity {
            Granularity::Word => {
                for (gl, pl) in gold_words(g)?.into_iter().zip(predicted_words(p, g)?) {
                    m.add(gl, pl);
                }
            }
            Granularity::Fragment => {
                let pl = p
                    .predicted_fragment()
                    .ok_or_else(|| Error::Coverage(format!("prediction for {} lacks a level", g.display_key())))?;
                m.add(gold_fragment(g)?, pl);
            }
        }
    }
    Ok(m)
}

pub fn evaluate<F: Float, P: Prediction>(preds: &[P], gold: &Corpus, granularity: Granularity) -> Result<EvalReportOf<F>> {
    report(&confusion_for(preds, gold, granularity)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::WordDecision;
    use crate::corpus::{parse_labeled, ParseOptions};
    use ReadabilityLevel::*;

    fn corpus(text: &str) -> Corpus {
        parse_labeled(text.as_bytes(), ParseOptions::default()).unwrap()
    }

    fn trace(doc: &str, frag: &str, words: &[(&str, ReadabilityLevel)]) -> TagTrace {
        TagTrace::new(
            doc,
            frag,
            words.iter().map(|(s, l)| WordDecision { surface: s.to_string(), level: *l, layer: 0 }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn gold_against_itself_is_perfect() {
        let gold = corpus("d\t1\ta|3 b|4\nd\t2\tc|5\nd\t3\te|3\n");
        for granularity in [Granularity::Word, Granularity::Fragment] {
            let r: EvalReportOf<f64> = evaluate(gold.fragments(), &gold, granularity).unwrap();
            assert_eq!(r.accuracy, 100.0);
            assert_eq!(r.macro_f1, 100.0);
        }
    }

    #[test]
    fn one_wrong_word_breaks_the_fragment() {
        let gold = corpus("d\t1\ta|3 b|3\n");
        let preds = [trace("d", "1", &[("a", L3), ("b", L4)])];
        let m = confusion_for(&preds, &gold, Granularity::Fragment).unwrap();
        assert_eq!(m.get(L3, L4), 1);
        assert_eq!(m.total(), 1);
    }

    #[test]
    fn coverage_errors() {
        let gold = corpus("d\t1\ta|3\nd\t2\tb|3\n");
        let missing = [trace("d", "1", &[("a", L3)])];
        assert!(matches!(evaluate::<f64, _>(&missing, &gold, Granularity::Word), Err(Error::Coverage(_))));
        let extra = [trace("d", "1", &[("a", L3)]), trace("d", "2", &[("b", L3)]), trace("d", "3", &[("c", L3)])];
        assert!(matches!(evaluate::<f64, _>(&extra, &gold, Granularity::Word), Err(Error::Coverage(_))));
        let wrong_tokens = [trace("d", "1", &[("a", L3)]), trace("d", "2", &[("x", L3)])];
        assert!(matches!(evaluate::<f64, _>(&wrong_tokens, &gold, Granularity::Word), Err(Error::Coverage(_))));
        let unlabeled = corpus("d\t1\ta\nd\t2\tb\n");
        let ok = [trace("d", "1", &[("a", L3)]), trace("d", "2", &[("b", L3)])];
        assert!(matches!(evaluate::<f64, _>(&ok, &unlabeled, Granularity::Word), Err(Error::MissingGold(_))));
    }
}
