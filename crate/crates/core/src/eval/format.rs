//! Plain-text tables (rounded) and TSV (full precision) renderings.

use std::fmt::{Display, Write as _};
use std::str::FromStr;

use num_traits::Float;

use super::{ErrorCombinationTableOf, EvalReportOf, LayerDecompositionOf};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Tsv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "tsv" => Ok(OutputFormat::Tsv),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?} (text|tsv)"))),
        }
    }
}

/// One decimal, rounding halves up.
pub fn display_percent<F: Float>(value: F) -> String {
    let v = value.to_f64().unwrap_or(f64::NAN);
    // nudge so that values like 30.85 stored as 30.8499999 still round up
    let rounded = (v * 10.0 + 0.5 + 1e-9).floor() / 10.0;
    format!("{rounded:.1}")
}

const REPORT_COLUMNS: [&str; 5] = ["F1(3)", "F1(4)", "F1(5)", "F1", "Acc."];
const REPORT_TSV_HEADER: &str = "granularity\tf1_3\tf1_4\tf1_5\tmacro_f1\taccuracy";

fn report_values<F: Float>(r: &EvalReportOf<F>) -> [F; 5] {
    [r.f1[0], r.f1[1], r.f1[2], r.macro_f1, r.accuracy]
}

pub fn render_reports<F: Float + Display>(rows: &[(String, EvalReportOf<F>)], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            let width = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0).max(11);
            let _ = write!(out, "{:width$}", "");
            for c in REPORT_COLUMNS {
                let _ = write!(out, " {c:>7}");
            }
            out.push('\n');
            for (label, r) in rows {
                let _ = write!(out, "{label:width$}");
                for v in report_values(r) {
                    let _ = write!(out, " {:>7}", display_percent(v));
                }
                out.push('\n');
            }
        }
        OutputFormat::Tsv => {
            out.push_str(REPORT_TSV_HEADER);
            out.push('\n');
            for (label, r) in rows {
                out.push_str(label);
                for v in report_values(r) {
                    let _ = write!(out, "\t{v}");
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Reads back the TSV written by [`render_reports`].
pub fn parse_reports_tsv(text: &str) -> Result<Vec<(String, EvalReportOf<f64>)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == REPORT_TSV_HEADER => {}
        _ => return Err(Error::parse(1, "missing report header")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(Error::parse(i + 1, format!("expected 6 fields, found {}", fields.len())));
        }
        let mut values = [0.0f64; 5];
        for (slot, raw) in values.iter_mut().zip(&fields[1..]) {
            *slot = raw.parse().map_err(|_| Error::parse(i + 1, format!("bad number {raw:?}")))?;
        }
        let report = EvalReportOf { f1: [values[0], values[1], values[2]], macro_f1: values[3], accuracy: values[4] };
        rows.push((fields[0].to_owned(), report));
    }
    Ok(rows)
}

pub fn render_layers<F: Float + Display>(d: &LayerDecompositionOf<F>, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            let width = d.layers.iter().map(|l| l.name.chars().count()).max().unwrap_or(0).max(5);
            let _ = writeln!(
                out,
                "{:width$} {:>9} {:>9} {:>8} {:>10} {:>10}",
                "Layer", "Decisions", "Mistakes", "Applied", "Word Err", "Frag Err"
            );
            for l in &d.layers {
                let _ = writeln!(
                    out,
                    "{:width$} {:>9} {:>9} {:>8} {:>10} {:>10}",
                    l.name,
                    l.decisions,
                    l.mistakes,
                    display_percent(l.applied),
                    display_percent(l.word_error),
                    display_percent(l.fragment_error)
                );
            }
            let _ = writeln!(out, "{:width$} {:>9} {:>9}", "Total", d.total_decisions(), d.total_mistakes());
            out.push_str("Frag Err: share of the layer's word mistakes that sit in a mislabeled fragment.\n");
        }
        OutputFormat::Tsv => {
            out.push_str("layer\tdecisions\tmistakes\tfragment_mistakes\tapplied\tword_error\tfragment_error\n");
            for l in &d.layers {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    l.name, l.decisions, l.mistakes, l.fragment_mistakes, l.applied, l.word_error, l.fragment_error
                );
            }
        }
    }
    out
}

pub fn render_error_combinations<F: Float + Display>(t: &ErrorCombinationTableOf<F>, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            let _ = writeln!(out, "{:<10} {:>11} {:>11} {:>7}", "Fragment", "Word Errors", "# Fragments", "%");
            for r in &t.rows {
                let label = if r.fragment_correct { "Correct" } else { "Incorrect" };
                let _ = writeln!(out, "{:<10} {:>11} {:>11} {:>7}", label, r.bucket.to_string(), r.count, display_percent(r.fraction));
            }
        }
        OutputFormat::Tsv => {
            out.push_str("fragment_correct\tword_errors\tcount\tpercent\n");
            for r in &t.rows {
                let _ = writeln!(out, "{}\t{}\t{}\t{}", r.fragment_correct, r.bucket, r.count, r.fraction);
            }
        }
    }
    out
}

/// A model's word- and fragment-level scores.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelRowOf<F> {
    pub name: String,
    pub word: EvalReportOf<F>,
    pub fragment: EvalReportOf<F>,
}

pub fn render_model_rows<F: Float + Display>(rows: &[ModelRowOf<F>], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            let width = rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0).max(5);
            let _ = write!(out, "{:width$} |{:^40}|{:^40}\n{:width$} |", "", "Word-Level", "Fragment-Level", "Model");
            for _ in 0..2 {
                for c in REPORT_COLUMNS {
                    let _ = write!(out, " {c:>7}");
                }
                out.push_str(" |");
            }
            out.push('\n');
            for r in rows {
                let _ = write!(out, "{:width$} |", r.name);
                for report in [&r.word, &r.fragment] {
                    for v in report_values(report) {
                        let _ = write!(out, " {:>7}", display_percent(v));
                    }
                    out.push_str(" |");
                }
                out.push('\n');
            }
        }
        OutputFormat::Tsv => {
            out.push_str("model\tword_f1_3\tword_f1_4\tword_f1_5\tword_macro_f1\tword_accuracy");
            out.push_str("\tfrag_f1_3\tfrag_f1_4\tfrag_f1_5\tfrag_macro_f1\tfrag_accuracy\n");
            for r in rows {
                out.push_str(&r.name);
                for v in report_values(&r.word).into_iter().chain(report_values(&r.fragment)) {
                    let _ = write!(out, "\t{v}");
                }
                out.push('\n');
            }
        }
    }
    out
}
