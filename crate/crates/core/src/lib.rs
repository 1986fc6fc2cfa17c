//! Lexical readability leveling for words and sentence fragments.
//!
//! The crate covers the whole pipeline:
//!
//! * [`alignment`] derives gold word levels from an original fragment and its
//!   level-4 and level-3 simplifications, and the fragment level as the
//!   maximum word level;
//! * [`taggers`] holds the word taggers (MLE lookup, lemma lexicon,
//!   frequency binning, defaults, imported subword predictions);
//! * [`cascade`] chains taggers into back-off cascades and aggregates word
//!   levels into fragment levels;
//! * [`eval`] scores predictions (per-level F1, macro F1, accuracy) and
//!   breaks errors down by layer and by fragment.
//!
//! Metric and distribution types are generic over the float type; the
//! `f64` aliases below are what the rest of the toolkit uses.

pub mod alignment;
pub mod analyzer;
pub mod cascade;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod level;
pub mod taggers;
pub mod trace;

pub use cascade::{Cascade, CascadeSpec, Layer, LayerSpec, Resources, TagTrace, WordDecision};
pub use corpus::{Corpus, Fragment, ParallelCorpus, ParallelFragment, Split, Token};
pub use error::{Error, Result};
pub use eval::{ConfusionMatrix, Granularity};
pub use level::ReadabilityLevel;
pub use taggers::Decision;

pub type EvalReport = eval::EvalReportOf<f64>;
pub type LayerDecomposition = eval::LayerDecompositionOf<f64>;
pub type LayerStats = eval::LayerStatsOf<f64>;
pub type ErrorCombinationTable = eval::ErrorCombinationTableOf<f64>;
pub type ModelRow = eval::ModelRowOf<f64>;
pub type LevelDistribution = corpus::LevelDistributionOf<f64>;
