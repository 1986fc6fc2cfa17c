//! Back-off cascades: an ordered list of taggers where the first layer that
//! does not abstain decides each word, and fragments take the highest level
//! among their words.

mod combos;
mod config;
mod tune;

pub use combos::{enumerate_combinations, standalone_models, tuned_best, FINAL_LAYERS, PREFIXES};
pub use config::{parse_cascade_expr, parse_cascade_file, resolve_cascade};
pub use tune::{default_threshold_grid, tune_mle_threshold, TuneResult};

use std::fmt;

use rayon::prelude::*;

use crate::analyzer::{AnalyzerTable, DEFAULT_TOP_EPSILON};
use crate::corpus::{Corpus, Fragment, Split, Token};
use crate::error::{Error, Result};
use crate::level::{max_level, ReadabilityLevel};
use crate::taggers::{lex_tag, BinTable, Decision, Lexicon, MleTable, PredictionMap, WordContext};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Layer {
    Mle { min_prob: f64, min_count: u64 },
    Lex,
    DistFreq,
    ExFreq,
    Default(ReadabilityLevel),
    External,
}

impl Layer {
    pub const MLE: Layer = Layer::Mle { min_prob: 0.0, min_count: 0 };

    /// Total layers never abstain and may close a cascade.
    pub fn is_total(&self) -> bool {
        matches!(self, Layer::DistFreq | Layer::ExFreq | Layer::Default(_))
    }

    pub fn name(&self) -> String {
        match self {
            Layer::Mle { min_prob, min_count } if *min_prob > 0.0 || *min_count > 0 => "Tuned-MLE".into(),
            Layer::Mle { .. } => "MLE".into(),
            Layer::Lex => "Lex".into(),
            Layer::DistFreq => "Dist-Freq".into(),
            Layer::ExFreq => "Ex-Freq".into(),
            Layer::Default(level) => format!("L{level}"),
            Layer::External => "BERT".into(),
        }
    }
}

/// A layer plus an optional resource path (`table=` / `preds=` in configs).
#[derive(Clone, Debug, PartialEq)]
pub struct LayerSpec {
    pub layer: Layer,
    pub source: Option<String>,
}

impl From<Layer> for LayerSpec {
    fn from(layer: Layer) -> Self {
        LayerSpec { layer, source: None }
    }
}

impl fmt::Display for LayerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut params = Vec::new();
        let head = match self.layer {
            Layer::Mle { min_prob, min_count } => {
                params.push(format!("min_prob={min_prob}"));
                if min_count > 0 {
                    params.push(format!("min_count={min_count}"));
                }
                if let Some(s) = &self.source {
                    params.push(format!("table={s}"));
                }
                "mle".to_string()
            }
            Layer::Lex => "lex".into(),
            Layer::DistFreq | Layer::ExFreq => {
                if let Some(s) = &self.source {
                    params.push(format!("table={s}"));
                }
                if self.layer == Layer::DistFreq { "dist_freq" } else { "ex_freq" }.into()
            }
            Layer::Default(level) => format!("default{level}"),
            Layer::External => {
                if let Some(s) = &self.source {
                    params.push(format!("preds={s}"));
                }
                "external".into()
            }
        };
        if params.is_empty() {
            f.write_str(&head)
        } else {
            write!(f, "{head}({})", params.join(", "))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeSpec {
    name: String,
    layers: Vec<LayerSpec>,
}

impl CascadeSpec {
    /// Requires a non-empty layer list ending in a total layer.
    pub fn new(name: impl Into<String>, layers: Vec<LayerSpec>) -> Result<Self> {
        let spec = Self::partial(name, layers)?;
        let last = spec.layers.last().expect("non-empty");
        if !last.layer.is_total() {
            return Err(Error::InvalidCascade(format!(
                "{}: final layer {} may abstain; end with a default, Dist-Freq or Ex-Freq layer",
                spec.name,
                last.layer.name()
            )));
        }
        Ok(spec)
    }

    /// Like [`CascadeSpec::new`] but allows a final layer that abstains.
    pub fn partial(name: impl Into<String>, layers: Vec<LayerSpec>) -> Result<Self> {
        let name = name.into();
        if layers.is_empty() {
            return Err(Error::InvalidCascade(format!("{name}: no layers")));
        }
        Ok(CascadeSpec { name, layers })
    }

    /// Named with the arrow notation of its layers, e.g. `MLE → Lex → L3`.
    pub fn from_layers(layers: &[Layer]) -> Result<Self> {
        Self::new(arrow_name(layers.iter()), layers.iter().copied().map(LayerSpec::from).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn layers(&self) -> &[LayerSpec] {
        &self.layers
    }

    pub fn layer_names(&self) -> Vec<String> {
        self.layers.iter().map(|l| l.layer.name()).collect()
    }

    pub fn is_total(&self) -> bool {
        self.layers.last().is_some_and(|l| l.layer.is_total())
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Appends a layer; the result is checked like [`CascadeSpec::partial`].
    pub fn then(mut self, layer: impl Into<LayerSpec>) -> Self {
        self.layers.push(layer.into());
        self.name = arrow_name(self.layers.iter().map(|l| &l.layer));
        self
    }

    /// Replaces the parameters of every MLE layer.
    pub fn with_mle_params(mut self, min_prob: f64, min_count: u64) -> Self {
        for spec in &mut self.layers {
            if let Layer::Mle { .. } = spec.layer {
                spec.layer = Layer::Mle { min_prob, min_count };
            }
        }
        self
    }

    /// Config-file expression form, e.g. `mle(min_prob=0.85) -> lex -> default3`.
    pub fn expression(&self) -> String {
        self.layers.iter().map(ToString::to_string).collect::<Vec<_>>().join(" -> ")
    }
}

pub(crate) fn arrow_name<'a>(layers: impl Iterator<Item = &'a Layer>) -> String {
    layers.map(Layer::name).collect::<Vec<_>>().join(" → ")
}

/// Tagger stores a cascade draws on. Absent stores are only an error when a
/// layer needs them.
#[derive(Clone, Debug)]
pub struct Resources {
    pub mle: Option<MleTable>,
    pub lexicon: Option<Lexicon>,
    pub analyzer: Option<AnalyzerTable>,
    pub dist_freq: Option<BinTable>,
    pub ex_freq: Option<BinTable>,
    pub external: Option<PredictionMap>,
    pub top_epsilon: f64,
}

impl Default for Resources {
    fn default() -> Self {
        Resources {
            mle: None,
            lexicon: None,
            analyzer: None,
            dist_freq: None,
            ex_freq: None,
            external: None,
            top_epsilon: DEFAULT_TOP_EPSILON,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum BoundLayer<'r> {
    Mle { table: &'r MleTable, min_prob: f64, min_count: u64 },
    Lex { lexicon: &'r Lexicon, analyzer: &'r AnalyzerTable, epsilon: f64 },
    Bins(&'r BinTable),
    Default(ReadabilityLevel),
    External(&'r PredictionMap),
}

impl BoundLayer<'_> {
    fn decide(&self, ctx: &WordContext<'_>) -> Decision {
        match *self {
            BoundLayer::Mle { table, min_prob, min_count } => table.tag(ctx.surface, min_prob, min_count),
            BoundLayer::Lex { lexicon, analyzer, epsilon } => lex_tag(lexicon, analyzer, ctx.surface, epsilon),
            BoundLayer::Bins(table) => table.tag(ctx.surface),
            BoundLayer::Default(level) => Decision::Level(level),
            BoundLayer::External(map) => map.tag(ctx),
        }
    }
}

/// A cascade spec bound to the stores its layers need.
#[derive(Clone, Debug)]
pub struct Cascade<'r> {
    spec: CascadeSpec,
    layers: Vec<BoundLayer<'r>>,
    external: Option<&'r PredictionMap>,
}

fn need<'r, T>(store: &'r Option<T>, layer: &Layer, resource: &'static str) -> Result<&'r T> {
    store.as_ref().ok_or_else(|| Error::MissingResource { layer: layer.name(), resource })
}

/// Per-word outcome: the level and the index of the layer that chose it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordDecision {
    pub surface: String,
    pub level: ReadabilityLevel,
    pub layer: usize,
}

/// Cascade output for one fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagTrace {
    pub doc_id: String,
    pub frag_id: String,
    pub words: Vec<WordDecision>,
    pub fragment_level: ReadabilityLevel,
}

impl TagTrace {
    pub fn new(doc_id: impl Into<String>, frag_id: impl Into<String>, words: Vec<WordDecision>) -> Result<Self> {
        let fragment_level = max_level(words.iter().map(|w| w.level)).ok_or(Error::Empty("trace has no words"))?;
        Ok(TagTrace { doc_id: doc_id.into(), frag_id: frag_id.into(), words, fragment_level })
    }

    pub fn word_levels(&self) -> Vec<ReadabilityLevel> {
        self.words.iter().map(|w| w.level).collect()
    }

    /// The fragment with predicted word and fragment levels attached.
    pub fn to_fragment(&self) -> Result<Fragment> {
        let tokens = self
            .words
            .iter()
            .map(|w| Token::new(w.surface.clone(), Some(w.level)))
            .collect::<Result<Vec<_>>>()?;
        Fragment::new(self.doc_id.clone(), self.frag_id.clone(), tokens, Some(self.fragment_level))
    }
}

impl<'r> Cascade<'r> {
    pub fn bind(spec: &CascadeSpec, resources: &'r Resources) -> Result<Self> {
        let mut external = None;
        let layers = spec
            .layers
            .iter()
            .map(|ls| {
                let layer = &ls.layer;
                Ok(match *layer {
                    Layer::Mle { min_prob, min_count } => {
                        if !(0.0..=1.0).contains(&min_prob) {
                            return Err(Error::InvalidCascade(format!("min_prob {min_prob} outside [0, 1]")));
                        }
                        BoundLayer::Mle { table: need(&resources.mle, layer, "MLE table")?, min_prob, min_count }
                    }
                    Layer::Lex => BoundLayer::Lex {
                        lexicon: need(&resources.lexicon, layer, "lexicon")?,
                        analyzer: need(&resources.analyzer, layer, "analyzer table")?,
                        epsilon: resources.top_epsilon,
                    },
                    Layer::DistFreq => BoundLayer::Bins(need(&resources.dist_freq, layer, "Dist-Freq bin table")?),
                    Layer::ExFreq => BoundLayer::Bins(need(&resources.ex_freq, layer, "Ex-Freq bin table")?),
                    Layer::Default(level) => BoundLayer::Default(level),
                    Layer::External => {
                        let map = need(&resources.external, layer, "predictions file")?;
                        external = Some(map);
                        BoundLayer::External(map)
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cascade { spec: spec.clone(), layers, external })
    }

    pub fn spec(&self) -> &CascadeSpec {
        &self.spec
    }

    /// First non-abstaining layer, or `None` if all abstain (only possible
    /// for partial cascades).
    pub fn decide(&self, ctx: &WordContext<'_>) -> Option<(ReadabilityLevel, usize)> {
        self.layers
            .iter()
            .enumerate()
            .find_map(|(i, layer)| layer.decide(ctx).level().map(|level| (level, i)))
    }

    pub fn tag_word(&self, ctx: &WordContext<'_>) -> Result<(ReadabilityLevel, usize)> {
        self.decide(ctx).ok_or_else(|| {
            Error::InvalidCascade(format!("{}: every layer abstained on {:?}", self.spec.name, ctx.surface))
        })
    }

    pub fn tag_fragment(&self, fragment: &Fragment) -> Result<TagTrace> {
        if fragment.is_empty() {
            return Err(Error::EmptyFragment(fragment.display_key()));
        }
        if let Some(map) = self.external {
            map.check_fragment(fragment)?;
        }
        let words = fragment
            .tokens()
            .iter()
            .enumerate()
            .map(|(index, token)| {
                let ctx = WordContext {
                    doc_id: fragment.doc_id(),
                    frag_id: fragment.frag_id(),
                    index,
                    surface: token.surface(),
                };
                let (level, layer) = self.tag_word(&ctx)?;
                Ok(WordDecision { surface: token.surface().to_owned(), level, layer })
            })
            .collect::<Result<Vec<_>>>()?;
        TagTrace::new(fragment.doc_id(), fragment.frag_id(), words)
    }

    /// Tags fragments in parallel; output keeps corpus order.
    pub fn tag_corpus(&self, corpus: &Corpus) -> Result<Vec<TagTrace>> {
        corpus.fragments().par_iter().map(|f| self.tag_fragment(f)).collect()
    }
}

/// Labeled corpus built from cascade output.
pub fn traces_to_corpus(traces: &[TagTrace], split: Split) -> Result<Corpus> {
    Corpus::new(split, traces.iter().map(TagTrace::to_fragment).collect::<Result<Vec<_>>>()?)
}
