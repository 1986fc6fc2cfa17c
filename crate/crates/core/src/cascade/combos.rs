use super::{CascadeSpec, Layer, LayerSpec};
use crate::level::ReadabilityLevel;

/// Early layers, in report order.
pub const PREFIXES: [&[Layer]; 4] = [
    &[Layer::MLE],
    &[Layer::MLE, Layer::Lex],
    &[Layer::Lex],
    &[Layer::Lex, Layer::MLE],
];

/// Back-off layers closing each prefix, in report order.
pub const FINAL_LAYERS: [Layer; 6] = [
    Layer::Default(ReadabilityLevel::L3),
    Layer::Default(ReadabilityLevel::L4),
    Layer::Default(ReadabilityLevel::L5),
    Layer::DistFreq,
    Layer::ExFreq,
    Layer::External,
];

fn close(layers: Vec<Layer>) -> CascadeSpec {
    let name = super::arrow_name(layers.iter());
    let mut specs: Vec<LayerSpec> = layers.into_iter().map(LayerSpec::from).collect();
    // the external tagger may abstain; a majority-level default catches those words
    if specs.last().is_some_and(|l| l.layer == Layer::External) {
        specs.push(Layer::Default(ReadabilityLevel::L3).into());
    }
    CascadeSpec::new(name, specs).expect("closed cascade")
}

/// The 24 layered combinations: four MLE/Lex prefixes times six finals.
pub fn enumerate_combinations() -> Vec<CascadeSpec> {
    PREFIXES
        .iter()
        .flat_map(|prefix| {
            FINAL_LAYERS.iter().map(move |last| {
                let mut layers = prefix.to_vec();
                layers.push(*last);
                close(layers)
            })
        })
        .collect()
}

/// The six single-model baselines.
pub fn standalone_models() -> Vec<CascadeSpec> {
    FINAL_LAYERS
        .iter()
        .map(|layer| {
            let spec = close(vec![*layer]);
            match layer {
                Layer::Default(level) => spec.renamed(format!("Default level {level}")),
                _ => spec,
            }
        })
        .collect()
}

/// MLE with a probability floor, then Lex, then external predictions.
pub fn tuned_best(min_prob: f64) -> CascadeSpec {
    close(vec![Layer::Mle { min_prob, min_count: 0 }, Layer::Lex, Layer::External])
}
