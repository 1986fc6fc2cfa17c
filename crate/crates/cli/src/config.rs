//! Run configuration: TOML file values overridden by command-line flags.
//!
//! Relative resource paths (tables, lexicon, analyzer, predictions, cascade
//! file, and `table=`/`preds=` layer parameters) resolve against the data
//! directory when one is set: `--data-dir`, then `data_dir` in the config
//! file, then the `READLEVEL_DATA_DIR` environment variable. Corpus paths
//! given on the command line are used as-is.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const DATA_DIR_ENV: &str = "READLEVEL_DATA_DIR";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub data_dir: Option<PathBuf>,
    pub mle: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub analyzer: Option<PathBuf>,
    pub dist_freq: Option<PathBuf>,
    pub ex_freq: Option<PathBuf>,
    pub predictions: Option<PathBuf>,
    pub cascades: Option<PathBuf>,
    pub cascade: Option<String>,
    /// Lexicon join on (lemma, POS) before lemma alone. Defaults to true.
    pub pos_sensitive: Option<bool>,
    pub top_epsilon: Option<f64>,
    pub normalize: Option<bool>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `overrides` win.
    pub fn merged(self, overrides: RunConfig) -> RunConfig {
        RunConfig {
            data_dir: overrides.data_dir.or(self.data_dir),
            mle: overrides.mle.or(self.mle),
            lexicon: overrides.lexicon.or(self.lexicon),
            analyzer: overrides.analyzer.or(self.analyzer),
            dist_freq: overrides.dist_freq.or(self.dist_freq),
            ex_freq: overrides.ex_freq.or(self.ex_freq),
            predictions: overrides.predictions.or(self.predictions),
            cascades: overrides.cascades.or(self.cascades),
            cascade: overrides.cascade.or(self.cascade),
            pos_sensitive: overrides.pos_sensitive.or(self.pos_sensitive),
            top_epsilon: overrides.top_epsilon.or(self.top_epsilon),
            normalize: overrides.normalize.or(self.normalize),
        }
    }

    /// Fills `data_dir` from the environment when neither flag nor file set it.
    pub fn with_env_defaults(mut self) -> Self {
        if self.data_dir.is_none() {
            self.data_dir = std::env::var_os(DATA_DIR_ENV).map(PathBuf::from);
        }
        self
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        match &self.data_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }

    pub fn pos_sensitive(&self) -> bool {
        self.pos_sensitive.unwrap_or(true)
    }

    pub fn top_epsilon(&self) -> f64 {
        self.top_epsilon.unwrap_or(readlevel::analyzer::DEFAULT_TOP_EPSILON)
    }

    pub fn normalize(&self) -> bool {
        self.normalize.unwrap_or(false)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_else(|e| format!("<unprintable config: {e}>"))
    }
}
