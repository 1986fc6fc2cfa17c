use num_traits::Float;

use super::{gold_fragment, gold_words, pair_with_gold};
use crate::cascade::TagTrace;
use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Decisions and mistakes of one cascade layer. Rates are percentages:
/// `applied` over all tokens, `word_error` over the layer's decisions, and
/// `fragment_error` over the layer's mistakes (a mistaken word counts when
/// its fragment ends up mislabeled).
#[derive(Clone, Debug, PartialEq)]
pub struct LayerStatsOf<F> {
    pub name: String,
    pub decisions: usize,
    pub mistakes: usize,
    pub fragment_mistakes: usize,
    pub applied: F,
    pub word_error: F,
    pub fragment_error: F,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerDecompositionOf<F> {
    pub layers: Vec<LayerStatsOf<F>>,
    pub total_tokens: usize,
}

impl<F: Float> LayerDecompositionOf<F> {
    pub fn total_decisions(&self) -> usize {
        self.layers.iter().map(|l| l.decisions).sum()
    }

    pub fn total_mistakes(&self) -> usize {
        self.layers.iter().map(|l| l.mistakes).sum()
    }
}

fn percent<F: Float>(num: usize, den: usize) -> F {
    if den == 0 {
        F::zero()
    } else {
        F::from(100).unwrap() * F::from(num).unwrap() / F::from(den).unwrap()
    }
}

pub fn layer_decomposition<F: Float>(
    traces: &[TagTrace],
    gold: &Corpus,
    layer_names: &[String],
) -> Result<LayerDecompositionOf<F>> {
    let n = layer_names.len();
    let mut decisions = vec![0usize; n];
    let mut mistakes = vec![0usize; n];
    let mut fragment_mistakes = vec![0usize; n];
    let mut total = 0;
    for (trace, g) in pair_with_gold(traces, gold)? {
        let fragment_wrong = trace.fragment_level != gold_fragment(g)?;
        for (word, gold_level) in trace.words.iter().zip(gold_words(g)?) {
            if word.layer >= n {
                return Err(Error::InvalidArgument(format!(
                    "trace refers to layer {} but the cascade has {n}",
                    word.layer
                )));
            }
            total += 1;
            decisions[word.layer] += 1;
            if word.level != gold_level {
                mistakes[word.layer] += 1;
                if fragment_wrong {
                    fragment_mistakes[word.layer] += 1;
                }
            }
        }
    }
    let layers = layer_names
        .iter()
        .enumerate()
        .map(|(i, name)| LayerStatsOf {
            name: name.clone(),
            decisions: decisions[i],
            mistakes: mistakes[i],
            fragment_mistakes: fragment_mistakes[i],
            applied: percent(decisions[i], total),
            word_error: percent(mistakes[i], decisions[i]),
            fragment_error: percent(fragment_mistakes[i], mistakes[i]),
        })
        .collect();
    Ok(LayerDecompositionOf { layers, total_tokens: total })
}
