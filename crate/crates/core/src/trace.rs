//! Trace files: per-word cascade decisions.
//!
//! ```text
//! # cascade<TAB><name>
//! # layers<TAB><layer 0><TAB><layer 1>...
//! doc_id<TAB>frag_id<TAB>word_index<TAB>surface<TAB>level<TAB>layer_index
//! ```

use std::io::{BufRead, Write};

use crate::cascade::{TagTrace, WordDecision};
use crate::error::{Error, Result};
use crate::level::ReadabilityLevel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFile {
    pub cascade: String,
    pub layers: Vec<String>,
    pub traces: Vec<TagTrace>,
}

pub fn write_traces<W: Write>(file: &TraceFile, mut sink: W) -> Result<()> {
    writeln!(sink, "# cascade\t{}", file.cascade)?;
    write!(sink, "# layers")?;
    for layer in &file.layers {
        write!(sink, "\t{layer}")?;
    }
    writeln!(sink)?;
    for trace in &file.traces {
        for (i, w) in trace.words.iter().enumerate() {
            writeln!(sink, "{}\t{}\t{i}\t{}\t{}\t{}", trace.doc_id, trace.frag_id, w.surface, w.level, w.layer)?;
        }
    }
    sink.flush()?;
    Ok(())
}

pub fn parse_traces<R: BufRead>(source: R) -> Result<TraceFile> {
    let mut lines = source.lines();
    let header = lines.next().ok_or(Error::Empty("trace file"))??;
    let cascade = header
        .strip_prefix("# cascade\t")
        .ok_or_else(|| Error::parse(1, "missing '# cascade' header"))?
        .to_owned();
    let header = lines.next().ok_or_else(|| Error::parse(2, "missing '# layers' header"))??;
    let mut fields = header.split('\t');
    if fields.next() != Some("# layers") {
        return Err(Error::parse(2, "missing '# layers' header"));
    }
    let layers: Vec<String> = fields.map(str::to_owned).collect();

    let mut traces = Vec::new();
    let mut current: Option<(String, String, Vec<WordDecision>)> = None;
    for (i, line) in lines.enumerate() {
        let line_no = i + 3;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [doc, frag, index, surface, level, layer] = fields[..] else {
            return Err(Error::parse(line_no, format!("expected 6 fields, found {}", fields.len())));
        };
        let index: usize = index.parse().map_err(|_| Error::parse(line_no, "bad word index"))?;
        let level: ReadabilityLevel = level.parse().map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
        let layer: usize = layer.parse().map_err(|_| Error::parse(line_no, "bad layer index"))?;
        if layer >= layers.len() {
            return Err(Error::parse(line_no, format!("layer {layer} not declared in header")));
        }
        let continues = matches!(&current, Some((d, f, _)) if d == doc && f == frag);
        if !continues {
            if let Some((d, f, words)) = current.take() {
                traces.push(TagTrace::new(d, f, words)?);
            }
            current = Some((doc.to_owned(), frag.to_owned(), Vec::new()));
        }
        let words = &mut current.as_mut().expect("just set").2;
        if index != words.len() {
            return Err(Error::parse(line_no, format!("expected word index {}, found {index}", words.len())));
        }
        words.push(WordDecision { surface: surface.to_owned(), level, layer });
    }
    if let Some((d, f, words)) = current {
        traces.push(TagTrace::new(d, f, words)?);
    }
    Ok(TraceFile { cascade, layers, traces })
}
