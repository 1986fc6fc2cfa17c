//! Batch front end for the `readlevel` toolkit: label derivation, model
//! building, tagging, evaluation, tuning and combination tables.

pub mod commands;
pub mod config;

pub use commands::{
    cmd_build, cmd_combos, cmd_derive_labels, cmd_evaluate, cmd_stats, cmd_tag, cmd_tune, BuildKind, EvalFlags,
};
pub use config::{RunConfig, DATA_DIR_ENV};
