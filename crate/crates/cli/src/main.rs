use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use readlevel::cascade::default_threshold_grid;
use readlevel::eval::OutputFormat;
use readlevel::taggers::MassMode;
use readlevel_cli::commands::{render_distribution, write_text};
use readlevel_cli::{
    cmd_build, cmd_combos, cmd_derive_labels, cmd_evaluate, cmd_stats, cmd_tag, cmd_tune, BuildKind, EvalFlags,
    RunConfig,
};

#[derive(Parser, Debug)]
#[command(name = "readlevel", version, about = "Word- and fragment-level readability leveling")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// TOML run configuration; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base directory for relative resource paths [default: $READLEVEL_DATA_DIR].
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    /// MLE table (word, count3, count4, count5).
    #[arg(long, global = true)]
    mle: Option<PathBuf>,
    /// Lemma lexicon (lemma, pos, level).
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Morphological analyzer table (surface, lemma, pos, logprob).
    #[arg(long, global = true)]
    analyzer: Option<PathBuf>,
    /// Dist-Freq bin table.
    #[arg(long, global = true)]
    dist_freq: Option<PathBuf>,
    /// Ex-Freq bin table.
    #[arg(long, global = true)]
    ex_freq: Option<PathBuf>,
    /// Subword predictions of an external tagger.
    #[arg(long, global = true)]
    predictions: Option<PathBuf>,
    /// File of named cascade definitions.
    #[arg(long, global = true)]
    cascades: Option<PathBuf>,
    /// Cascade name or inline expression such as "mle -> lex -> default3".
    #[arg(long, global = true)]
    cascade: Option<String>,
    /// Join the lexicon on (lemma, POS) before lemma alone [default: true].
    #[arg(long, global = true)]
    pos_sensitive: Option<bool>,
    /// Log-probability band defining the analyzer's top analyses [default: 1e-9].
    #[arg(long, global = true)]
    top_epsilon: Option<f64>,
    /// Fold Alif, Alif Maqsura and Ta Marbuta variants when reading corpora [default: false].
    #[arg(long, global = true)]
    normalize: Option<bool>,
}

impl GlobalArgs {
    fn overrides(&self) -> RunConfig {
        RunConfig {
            data_dir: self.data_dir.clone(),
            mle: self.mle.clone(),
            lexicon: self.lexicon.clone(),
            analyzer: self.analyzer.clone(),
            dist_freq: self.dist_freq.clone(),
            ex_freq: self.ex_freq.clone(),
            predictions: self.predictions.clone(),
            cascades: self.cascades.clone(),
            cascade: self.cascade.clone(),
            pos_sensitive: self.pos_sensitive,
            top_epsilon: self.top_epsilon,
            normalize: self.normalize,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Tsv => OutputFormat::Tsv,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mass {
    Tokens,
    Types,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Label words of a parallel corpus by comparing versions.
    DeriveLabels {
        parallel: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Build a model table.
    Build {
        #[command(subcommand)]
        kind: BuildCommand,
    },
    /// Tag a corpus with a cascade; writes a labeled corpus and a trace.
    Tag {
        corpus: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Trace output [default: <out>.trace.tsv].
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Score predictions (trace or labeled corpus) against gold.
    Evaluate {
        pred: PathBuf,
        gold: PathBuf,
        /// Per-layer decisions and errors (needs a trace).
        #[arg(long)]
        layers: bool,
        /// Fragment correctness by number of word errors.
        #[arg(long)]
        error_combos: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Sweep the MLE probability floor of a cascade on a dev corpus.
    Tune {
        dev: PathBuf,
        /// Comma-separated thresholds [default: 0.50,0.55,...,1.00].
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Score all standalone models and layered combinations on a dev corpus.
    Combos {
        dev: PathBuf,
        /// Add the tuned MLE → Lex → BERT row with this probability floor.
        #[arg(long)]
        tuned_threshold: Option<f64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Level distribution of a labeled corpus.
    Stats { corpus: PathBuf },
}

#[derive(Subcommand, Debug)]
enum BuildCommand {
    /// Per-word level counts from a labeled training corpus.
    Mle {
        #[arg(long)]
        train: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Frequency-list bins sized by a level distribution.
    DistFreq {
        #[arg(long)]
        freq: PathBuf,
        /// Level 3,4,5 fractions; derived from --train when omitted.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        fractions: Option<Vec<f64>>,
        #[arg(long)]
        train: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "tokens")]
        mass: Mass,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Equal-mass frequency bins labeled by training majority.
    ExFreq {
        #[arg(long)]
        freq: PathBuf,
        #[arg(long)]
        train: PathBuf,
        /// Number of bins [default: 10000].
        #[arg(long)]
        bins: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

fn build_kind(cmd: BuildCommand) -> Result<(BuildKind, PathBuf)> {
    Ok(match cmd {
        BuildCommand::Mle { train, out } => (BuildKind::Mle { train }, out),
        BuildCommand::DistFreq { freq, fractions, train, mass, out } => {
            let fractions = match fractions.as_deref() {
                None => None,
                Some(&[a, b, c]) => Some([a, b, c]),
                Some(other) => bail!("--fractions takes three values, got {}", other.len()),
            };
            let mass = match mass {
                Mass::Tokens => MassMode::Tokens,
                Mass::Types => MassMode::Types,
            };
            (BuildKind::DistFreq { freq, fractions, train, mass }, out)
        }
        BuildCommand::ExFreq { freq, train, bins, out } => (BuildKind::ExFreq { freq, train, bins }, out),
    })
}

fn effective_config(global: &GlobalArgs) -> Result<RunConfig> {
    let file = match &global.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    Ok(file.merged(global.overrides()).with_env_defaults())
}

fn run(cli: Cli) -> Result<()> {
    let config = effective_config(&cli.global)?;
    eprintln!("# effective config\n{}", config.to_toml().trim_end());
    match cli.command {
        Command::DeriveLabels { parallel, out } => {
            let d = cmd_derive_labels(&parallel, &out, &config)?;
            write_text(None, &render_distribution(&d))
        }
        Command::Build { kind } => {
            let (kind, out) = build_kind(kind)?;
            let summary = cmd_build(&kind, &out, &config)?;
            eprintln!("{summary}");
            Ok(())
        }
        Command::Tag { corpus, out, trace } => {
            let trace = cmd_tag(&config, &corpus, &out, trace.as_deref())?;
            eprintln!("wrote {} and {}", out.display(), trace.display());
            Ok(())
        }
        Command::Evaluate { pred, gold, layers, error_combos, format, out } => {
            let flags = EvalFlags { layers, error_combos, format: format.into() };
            write_text(out.as_deref(), &cmd_evaluate(&pred, &gold, flags, &config)?)
        }
        Command::Tune { dev, grid, format } => {
            let grid = grid.unwrap_or_else(default_threshold_grid);
            write_text(None, &cmd_tune(&config, &dev, &grid, format.into())?)
        }
        Command::Combos { dev, tuned_threshold, format, out } => {
            write_text(out.as_deref(), &cmd_combos(&config, &dev, tuned_threshold, format.into())?)
        }
        Command::Stats { corpus } => write_text(None, &cmd_stats(&corpus, &config)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli).context("readlevel failed") {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

