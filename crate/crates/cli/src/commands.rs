//! Subcommand implementations. Each returns the text meant for standard
//! output so callers (the binary, tests) decide where it goes.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use readlevel::alignment::derive_word_labels;
use readlevel::analyzer::load_analyzer;
use readlevel::cascade::{
    enumerate_combinations, parse_cascade_file, resolve_cascade, standalone_models, traces_to_corpus, tune_mle_threshold,
    tuned_best,
};
use readlevel::corpus::{corpus_stats, parse_labeled, parse_parallel, write_corpus, ParseOptions};
use readlevel::eval::{
    error_combinations, evaluate, layer_decomposition, render_error_combinations, render_layers, render_model_rows,
    render_reports, Granularity, OutputFormat,
};
use readlevel::taggers::{
    build_dist_freq, build_ex_freq, build_mle, import_subword_predictions, load_bin_table, load_frequency_list,
    load_lexicon, load_mle, write_bin_table, write_mle, BinScheme, MassMode,
};
use readlevel::trace::{parse_traces, write_traces, TraceFile};
use readlevel::{Cascade, CascadeSpec, Corpus, EvalReport, Layer, LevelDistribution, ModelRow, ReadabilityLevel, Resources};

use crate::config::RunConfig;

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

pub fn read_corpus(path: &Path, options: ParseOptions) -> Result<Corpus> {
    parse_labeled(open(path)?, options).with_context(|| format!("reading corpus {}", path.display()))
}

pub fn render_distribution(d: &LevelDistribution) -> String {
    let mut out = format!("{:<6} {:>9} {:>7} {:>10} {:>7}\n", "level", "tokens", "%", "fragments", "%");
    for level in ReadabilityLevel::ALL {
        let i = level.index();
        out.push_str(&format!(
            "{:<6} {:>9} {:>7.1} {:>10} {:>7.1}\n",
            level,
            d.token_counts[i],
            100.0 * d.token_fractions[i],
            d.fragment_counts[i],
            100.0 * d.fragment_fractions[i]
        ));
    }
    out.push_str(&format!("{:<6} {:>9} {:>7} {:>10}\n", "total", d.token_total(), "", d.fragment_total()));
    out
}

/// Labels every word of a parallel corpus by comparing it with its
/// simplified versions, writes the labeled corpus, and returns its
/// distribution.
pub fn cmd_derive_labels(parallel: &Path, out: &Path, config: &RunConfig) -> Result<LevelDistribution> {
    let options = ParseOptions { normalize: config.normalize() };
    let corpus = parse_parallel(open(parallel)?, options)
        .with_context(|| format!("reading parallel corpus {}", parallel.display()))?;
    let fragments = corpus
        .fragments()
        .iter()
        .map(|p| {
            let (doc, frag) = p.key();
            derive_word_labels(p)
                .map(|l| l.to_fragment())
                .with_context(|| format!("deriving labels for {doc}/{frag}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let labeled = Corpus::new(corpus.split, fragments)?;
    write_corpus(&labeled, create(out)?).with_context(|| format!("writing {}", out.display()))?;
    Ok(corpus_stats(&labeled)?)
}

#[derive(Clone, Debug)]
pub enum BuildKind {
    Mle { train: PathBuf },
    DistFreq { freq: PathBuf, fractions: Option<[f64; 3]>, train: Option<PathBuf>, mass: MassMode },
    ExFreq { freq: PathBuf, train: PathBuf, bins: Option<usize> },
}

/// Builds a model table and writes it to `out`; returns a one-line summary.
pub fn cmd_build(kind: &BuildKind, out: &Path, config: &RunConfig) -> Result<String> {
    let options = ParseOptions { normalize: config.normalize() };
    let train_corpus = |path: &Path| -> Result<Corpus> {
        let corpus = read_corpus(path, options)?;
        if corpus.token_count() == 0 {
            bail!("training corpus {} is empty", path.display());
        }
        Ok(corpus)
    };
    let freq_list = |path: &Path| {
        load_frequency_list(open(path)?).with_context(|| format!("reading frequency list {}", path.display()))
    };
    let summary = match kind {
        BuildKind::Mle { train } => {
            let table = build_mle(&train_corpus(train)?)?;
            write_mle(&table, create(out)?)?;
            format!("mle: {} types", table.len())
        }
        BuildKind::DistFreq { freq, fractions, train, mass } => {
            let fractions = match (fractions, train) {
                (Some(f), _) => *f,
                (None, Some(train)) => corpus_stats::<f64>(&train_corpus(train)?)?.token_fractions,
                (None, None) => bail!("dist-freq needs --fractions or --train to derive them"),
            };
            let table = build_dist_freq(&freq_list(freq)?, fractions, *mass)?;
            write_bin_table(&table, create(out)?)?;
            let [c3, c4, c5] = table.type_counts();
            format!(
                "dist-freq: fractions {:.4}/{:.4}/{:.4}; types per level 3={c3} 4={c4} 5={c5}",
                fractions[0], fractions[1], fractions[2]
            )
        }
        BuildKind::ExFreq { freq, train, bins } => {
            let bins = bins.unwrap_or(readlevel::taggers::DEFAULT_EX_FREQ_BINS);
            let table = build_ex_freq(&freq_list(freq)?, &train_corpus(train)?, bins)?;
            write_bin_table(&table, create(out)?)?;
            let [c3, c4, c5] = table.type_counts();
            format!("ex-freq: {bins} bins; types per level 3={c3} 4={c4} 5={c5}")
        }
    };
    Ok(summary)
}

fn defined_cascades(config: &RunConfig) -> Result<Vec<CascadeSpec>> {
    match &config.cascades {
        Some(path) => {
            let path = config.resolve(path);
            parse_cascade_file(open(&path)?).with_context(|| format!("reading cascades {}", path.display()))
        }
        None => Ok(Vec::new()),
    }
}

pub fn resolve_config_cascade(config: &RunConfig, query: Option<&str>) -> Result<CascadeSpec> {
    let query = query
        .or(config.cascade.as_deref())
        .ok_or_else(|| anyhow!("no cascade given; pass --cascade or set `cascade` in the config file"))?;
    Ok(resolve_cascade(query, &defined_cascades(config)?)?)
}

/// Picks the file for a layer kind: a `table=`/`preds=` parameter on the
/// layer wins over the config path. Distinct parameters for the same kind
/// are rejected.
fn source_for(
    config: &RunConfig,
    specs: &[&CascadeSpec],
    matches: fn(&Layer) -> bool,
    configured: &Option<PathBuf>,
    flag: &str,
) -> Result<Option<PathBuf>> {
    let mut needed = false;
    let mut chosen: Option<&str> = None;
    for spec in specs {
        for ls in spec.layers().iter().filter(|ls| matches(&ls.layer)) {
            needed = true;
            if let Some(src) = ls.source.as_deref() {
                match chosen {
                    Some(prev) if prev != src => {
                        bail!("layer {} is given two sources: {prev} and {src}", ls.layer.name())
                    }
                    _ => chosen = Some(src),
                }
            }
        }
    }
    if !needed {
        return Ok(None);
    }
    let path = match (chosen, configured) {
        (Some(src), _) => PathBuf::from(src),
        (None, Some(p)) => p.clone(),
        (None, None) => {
            let layer = specs
                .iter()
                .flat_map(|s| s.layers())
                .find(|ls| matches(&ls.layer))
                .map(|ls| ls.layer.name())
                .unwrap_or_default();
            bail!("layer {layer} needs {flag}")
        }
    };
    Ok(Some(config.resolve(&path)))
}

/// Loads the stores needed by `specs`, and nothing else.
pub fn load_resources(config: &RunConfig, specs: &[&CascadeSpec]) -> Result<Resources> {
    let mut resources = Resources { top_epsilon: config.top_epsilon(), ..Resources::default() };
    if let Some(p) = source_for(config, specs, |l| matches!(l, Layer::Mle { .. }), &config.mle, "--mle")? {
        resources.mle = Some(load_mle(open(&p)?).with_context(|| format!("reading MLE table {}", p.display()))?);
    }
    if let Some(p) = source_for(config, specs, |l| *l == Layer::Lex, &config.lexicon, "--lexicon")? {
        let lexicon = load_lexicon(open(&p)?, config.pos_sensitive())
            .with_context(|| format!("reading lexicon {}", p.display()))?;
        resources.lexicon = Some(lexicon);
        let a = config.analyzer.as_ref().map(|a| config.resolve(a)).ok_or_else(|| anyhow!("layer Lex needs --analyzer"))?;
        resources.analyzer =
            Some(load_analyzer(open(&a)?).with_context(|| format!("reading analyzer table {}", a.display()))?);
    }
    let bins = |p: PathBuf, scheme: BinScheme| -> Result<_> {
        let table = load_bin_table(open(&p)?).with_context(|| format!("reading bin table {}", p.display()))?;
        if table.scheme() != scheme {
            bail!("{} holds a {} table, expected {scheme}", p.display(), table.scheme());
        }
        Ok(table)
    };
    if let Some(p) = source_for(config, specs, |l| *l == Layer::DistFreq, &config.dist_freq, "--dist-freq")? {
        resources.dist_freq = Some(bins(p, BinScheme::Dist)?);
    }
    if let Some(p) = source_for(config, specs, |l| *l == Layer::ExFreq, &config.ex_freq, "--ex-freq")? {
        resources.ex_freq = Some(bins(p, BinScheme::Ex)?);
    }
    if let Some(p) = source_for(config, specs, |l| *l == Layer::External, &config.predictions, "--predictions")? {
        resources.external = Some(
            import_subword_predictions(open(&p)?).with_context(|| format!("reading predictions {}", p.display()))?,
        );
    }
    Ok(resources)
}

pub fn trace_path_for(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".trace.tsv");
    PathBuf::from(name)
}

/// Tags `corpus` with the configured cascade, writing the labeled corpus to
/// `out` and the per-word trace next to it (or to `trace`). Returns the
/// trace file path.
pub fn cmd_tag(config: &RunConfig, corpus: &Path, out: &Path, trace: Option<&Path>) -> Result<PathBuf> {
    let spec = resolve_config_cascade(config, None)?;
    let resources = load_resources(config, &[&spec])?;
    let cascade = Cascade::bind(&spec, &resources)?;
    let input = read_corpus(corpus, ParseOptions { normalize: config.normalize() })?;
    let traces = cascade.tag_corpus(&input).with_context(|| format!("tagging with {}", spec.name()))?;
    write_corpus(&traces_to_corpus(&traces, input.split)?, create(out)?)
        .with_context(|| format!("writing {}", out.display()))?;
    let trace_path = trace.map_or_else(|| trace_path_for(out), Path::to_path_buf);
    let file = TraceFile { cascade: spec.name().to_owned(), layers: spec.layer_names(), traces };
    write_traces(&file, create(&trace_path)?).with_context(|| format!("writing {}", trace_path.display()))?;
    Ok(trace_path)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EvalFlags {
    pub layers: bool,
    pub error_combos: bool,
    pub format: OutputFormat,
}

fn is_trace_file(path: &Path) -> Result<bool> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.starts_with("# cascade\t"))
}

/// Scores predictions (a trace file or a labeled corpus) against gold.
pub fn cmd_evaluate(pred: &Path, gold: &Path, flags: EvalFlags, config: &RunConfig) -> Result<String> {
    let options = ParseOptions { normalize: config.normalize() };
    let gold = read_corpus(gold, options)?;
    let mut out = String::new();
    if is_trace_file(pred)? {
        let file = parse_traces(open(pred)?).with_context(|| format!("reading trace {}", pred.display()))?;
        out.push_str(&render_reports(&reports(&file.traces, &gold)?, flags.format));
        if flags.layers {
            out.push('\n');
            let d = layer_decomposition::<f64>(&file.traces, &gold, &file.layers)?;
            out.push_str(&render_layers(&d, flags.format));
        }
        if flags.error_combos {
            out.push('\n');
            out.push_str(&render_error_combinations(&error_combinations::<f64, _>(&file.traces, &gold)?, flags.format));
        }
    } else {
        if flags.layers {
            bail!("--layers needs a trace file; {} is a labeled corpus", pred.display());
        }
        let preds = read_corpus(pred, options)?;
        out.push_str(&render_reports(&reports(preds.fragments(), &gold)?, flags.format));
        if flags.error_combos {
            out.push('\n');
            out.push_str(&render_error_combinations(
                &error_combinations::<f64, _>(preds.fragments(), &gold)?,
                flags.format,
            ));
        }
    }
    Ok(out)
}

fn reports<P: readlevel::eval::Prediction>(preds: &[P], gold: &Corpus) -> Result<Vec<(String, EvalReport)>> {
    Ok(vec![
        ("word".to_owned(), evaluate(preds, gold, Granularity::Word)?),
        ("fragment".to_owned(), evaluate(preds, gold, Granularity::Fragment)?),
    ])
}

/// Sweeps MLE probability floors for the configured cascade on `dev`.
pub fn cmd_tune(config: &RunConfig, dev: &Path, grid: &[f64], format: OutputFormat) -> Result<String> {
    let spec = resolve_config_cascade(config, None)?;
    let resources = load_resources(config, &[&spec])?;
    let dev = read_corpus(dev, ParseOptions { normalize: config.normalize() })?;
    let result = tune_mle_threshold(&spec, &resources, &dev, grid)?;
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            out.push_str(&format!("cascade: {}\n{:>9} {:>9}\n", spec.name(), "threshold", "macro_f1"));
            for (t, score) in &result.scores {
                out.push_str(&format!("{t:>9.2} {:>9}\n", readlevel::eval::display_percent(*score)));
            }
            out.push_str(&format!("selected: {:.2}\n", result.best));
        }
        OutputFormat::Tsv => {
            out.push_str("threshold\tmacro_f1\n");
            for (t, score) in &result.scores {
                out.push_str(&format!("{t}\t{score}\n"));
            }
            out.push_str(&format!("selected\t{}\n", result.best));
        }
    }
    Ok(out)
}

/// The cascades scored by `combos`: six standalone models, the 24 layered
/// combinations, and the tuned cascade when a threshold is given.
pub fn combo_specs(tuned_threshold: Option<f64>) -> Vec<CascadeSpec> {
    let mut specs = standalone_models();
    specs.extend(enumerate_combinations());
    if let Some(t) = tuned_threshold {
        specs.push(tuned_best(t));
    }
    specs
}

/// Scores every combination on `dev` at word and fragment level.
pub fn cmd_combos(config: &RunConfig, dev: &Path, tuned_threshold: Option<f64>, format: OutputFormat) -> Result<String> {
    let specs = combo_specs(tuned_threshold);
    let refs: Vec<&CascadeSpec> = specs.iter().collect();
    let resources = load_resources(config, &refs)?;
    let dev = read_corpus(dev, ParseOptions { normalize: config.normalize() })?;
    let rows = specs
        .iter()
        .map(|spec| {
            let traces = Cascade::bind(spec, &resources)?
                .tag_corpus(&dev)
                .with_context(|| format!("tagging with {}", spec.name()))?;
            Ok(ModelRow {
                name: spec.name().to_owned(),
                word: evaluate(&traces, &dev, Granularity::Word)?,
                fragment: evaluate(&traces, &dev, Granularity::Fragment)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(render_model_rows(&rows, format))
}

/// Level distribution of a labeled corpus.
pub fn cmd_stats(corpus: &Path, config: &RunConfig) -> Result<String> {
    let corpus = read_corpus(corpus, ParseOptions { normalize: config.normalize() })?;
    Ok(render_distribution(&corpus_stats(&corpus)?))
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            Ok(lock.flush()?)
        }
    }
}
