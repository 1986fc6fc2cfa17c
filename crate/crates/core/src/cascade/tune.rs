use super::{Cascade, CascadeSpec, Layer, Resources};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::eval::{evaluate, EvalReportOf, Granularity};

/// Thresholds 0.50, 0.55, ..., 1.00.
pub fn default_threshold_grid() -> Vec<f64> {
    (0..=10).map(|i| f64::from(50 + 5 * i) / 100.0).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuneResult {
    pub best: f64,
    /// `(threshold, word-level macro F1)` in ascending threshold order.
    pub scores: Vec<(f64, f64)>,
}

/// Picks the MLE probability floor maximizing word-level macro F1 on `dev`;
/// ties go to the lower threshold.
pub fn tune_mle_threshold(
    template: &CascadeSpec,
    resources: &Resources,
    dev: &Corpus,
    candidates: &[f64],
) -> Result<TuneResult> {
    let mle_layers: Vec<u64> = template
        .layers()
        .iter()
        .filter_map(|l| match l.layer {
            Layer::Mle { min_count, .. } => Some(min_count),
            _ => None,
        })
        .collect();
    let min_count = match mle_layers[..] {
        [min_count] => min_count,
        [] => return Err(Error::InvalidCascade(format!("{}: no MLE layer to tune", template.name()))),
        _ => return Err(Error::InvalidCascade(format!("{}: more than one MLE layer", template.name()))),
    };
    if dev.token_count() == 0 {
        return Err(Error::Empty("dev corpus"));
    }
    if candidates.is_empty() {
        return Err(Error::InvalidArgument("no candidate thresholds".into()));
    }
    let mut grid = candidates.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut scores = Vec::with_capacity(grid.len());
    let mut best: Option<(f64, f64)> = None;
    for threshold in grid {
        let spec = template.clone().with_mle_params(threshold, min_count);
        let traces = Cascade::bind(&spec, resources)?.tag_corpus(dev)?;
        let report: EvalReportOf<f64> = evaluate(&traces, dev, Granularity::Word)?;
        scores.push((threshold, report.macro_f1));
        if best.is_none_or(|(_, score)| report.macro_f1 > score) {
            best = Some((threshold, report.macro_f1));
        }
    }
    Ok(TuneResult { best: best.expect("non-empty grid").0, scores })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_labeled, ParseOptions};
    use crate::level::ReadabilityLevel::L3;
    use crate::taggers::MleTable;

    fn setup() -> (Resources, Corpus, CascadeSpec) {
        let resources = Resources {
            mle: Some(MleTable::from_counts([("a".to_string(), [1, 0, 0])])),
            ..Resources::default()
        };
        let dev = parse_labeled("d\t1\ta|3 b|3\n".as_bytes(), ParseOptions::default()).unwrap();
        let spec = CascadeSpec::from_layers(&[Layer::MLE, Layer::Default(L3)]).unwrap();
        (resources, dev, spec)
    }

    #[test]
    fn grid() {
        let g = default_threshold_grid();
        assert_eq!(g.len(), 11);
        assert_eq!(g[7], 0.85);
    }

    #[test]
    fn singleton_and_ties() {
        let (res, dev, spec) = setup();
        assert_eq!(tune_mle_threshold(&spec, &res, &dev, &[0.0]).unwrap().best, 0.0);
        // every threshold scores the same here
        let r = tune_mle_threshold(&spec, &res, &dev, &[0.9, 0.3, 0.6]).unwrap();
        assert_eq!(r.best, 0.3);
        assert_eq!(r.scores.iter().map(|s| s.0).collect::<Vec<_>>(), [0.3, 0.6, 0.9]);
    }

    #[test]
    fn errors() {
        let (res, dev, _) = setup();
        let no_mle = CascadeSpec::from_layers(&[Layer::Default(L3)]).unwrap();
        assert!(tune_mle_threshold(&no_mle, &res, &dev, &[0.5]).is_err());
        let two = CascadeSpec::from_layers(&[Layer::MLE, Layer::MLE, Layer::Default(L3)]).unwrap();
        assert!(tune_mle_threshold(&two, &res, &dev, &[0.5]).is_err());
        let spec = CascadeSpec::from_layers(&[Layer::MLE, Layer::Default(L3)]).unwrap();
        assert!(tune_mle_threshold(&spec, &res, &Corpus::default(), &[0.5]).is_err());
        assert!(tune_mle_threshold(&spec, &res, &dev, &[]).is_err());
    }
}
