use num_traits::Float;

use crate::error::{Error, Result};
use crate::level::ReadabilityLevel;

/// 3×3 counts indexed by (gold, predicted).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: [[u64; 3]; 3],
}

impl ConfusionMatrix {
    pub fn from_counts(counts: [[u64; 3]; 3]) -> Self {
        ConfusionMatrix { counts }
    }

    pub fn add(&mut self, gold: ReadabilityLevel, pred: ReadabilityLevel) {
        self.counts[gold.index()][pred.index()] += 1;
    }

    pub fn get(&self, gold: ReadabilityLevel, pred: ReadabilityLevel) -> u64 {
        self.counts[gold.index()][pred.index()]
    }

    pub fn counts(&self) -> &[[u64; 3]; 3] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..3).map(|i| self.counts[i][i]).sum()
    }

    pub fn gold_total(&self, level: ReadabilityLevel) -> u64 {
        self.counts[level.index()].iter().sum()
    }

    pub fn predicted_total(&self, level: ReadabilityLevel) -> u64 {
        self.counts.iter().map(|row| row[level.index()]).sum()
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for (row, other_row) in self.counts.iter_mut().zip(other.counts.iter()) {
            for (c, o) in row.iter_mut().zip(other_row) {
                *c += o;
            }
        }
    }
}

pub fn confusion(gold: &[ReadabilityLevel], pred: &[ReadabilityLevel]) -> Result<ConfusionMatrix> {
    if gold.len() != pred.len() {
        return Err(Error::Coverage(format!("{} gold labels vs {} predictions", gold.len(), pred.len())));
    }
    if gold.is_empty() {
        return Err(Error::Empty("nothing to compare"));
    }
    let mut m = ConfusionMatrix::default();
    for (&g, &p) in gold.iter().zip(pred) {
        m.add(g, p);
    }
    Ok(m)
}

/// Per-level F1, macro F1 and accuracy, all as unrounded percentages.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalReportOf<F> {
    pub f1: [F; 3],
    pub macro_f1: F,
    pub accuracy: F,
}

impl<F: Float> EvalReportOf<F> {
    pub fn f1_of(&self, level: ReadabilityLevel) -> F {
        self.f1[level.index()]
    }
}

fn ratio<F: Float>(num: u64, den: u64) -> F {
    if den == 0 {
        F::zero()
    } else {
        F::from(num).unwrap() / F::from(den).unwrap()
    }
}

/// A level that is never predicted or never gold scores F1 = 0 and still
/// counts toward the macro average.
pub fn report<F: Float>(m: &ConfusionMatrix) -> Result<EvalReportOf<F>> {
    let total = m.total();
    if total == 0 {
        return Err(Error::Empty("confusion matrix"));
    }
    let hundred = F::from(100).unwrap();
    let f1 = ReadabilityLevel::ALL.map(|level| {
        let tp = m.get(level, level);
        let precision: F = ratio(tp, m.predicted_total(level));
        let recall: F = ratio(tp, m.gold_total(level));
        if precision + recall == F::zero() {
            F::zero()
        } else {
            hundred * (F::from(2).unwrap() * precision * recall) / (precision + recall)
        }
    });
    let macro_f1 = (f1[0] + f1[1] + f1[2]) / F::from(3).unwrap();
    let accuracy = hundred * ratio::<F>(m.correct(), total);
    Ok(EvalReportOf { f1, macro_f1, accuracy })
}
