//! Seeded synthetic data sets: a labeled train/dev split plus every resource
//! a cascade can draw on (MLE, lexicon, analyzer, bin tables, predictions).

#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use readlevel::taggers::MassMode;
use readlevel_cli::{cmd_build, BuildKind, RunConfig};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Level 3, 4 or 5 with the given weights.
pub fn weighted_level(rng: &mut impl Rng, weights: [f64; 3]) -> u8 {
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return 3 + i as u8;
        }
        x -= w;
    }
    5
}

pub struct Vocabulary {
    pub words: Vec<String>,
    pub levels: Vec<u8>,
}

impl Vocabulary {
    pub fn new(rng: &mut impl Rng, size: usize) -> Self {
        let words = (0..size).map(|i| format!("w{i}")).collect();
        let levels = (0..size).map(|_| weighted_level(rng, [0.8, 0.13, 0.07])).collect();
        Vocabulary { words, levels }
    }

    /// Index drawn from a Zipf-like law (low indices frequent).
    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        let n = self.words.len() as f64;
        ((n + 1.0).powf(rng.gen::<f64>()) - 1.0).floor().min(n - 1.0) as usize
    }
}

/// Labeled corpus text; a token keeps its word's level 85% of the time.
pub fn labeled_corpus(rng: &mut impl Rng, vocab: &Vocabulary, doc: &str, fragments: usize) -> String {
    let mut out = String::new();
    for f in 0..fragments {
        let len = rng.gen_range(1..=8);
        let tokens: Vec<String> = (0..len)
            .map(|_| {
                let i = vocab.sample(rng);
                let level = if rng.gen_bool(0.85) { vocab.levels[i] } else { rng.gen_range(3..=5) };
                format!("{}|{level}", vocab.words[i])
            })
            .collect();
        let _ = writeln!(out, "{doc}\t{f}\t{}", tokens.join(" "));
    }
    out
}

pub struct Fixture {
    pub dir: PathBuf,
    pub train: PathBuf,
    pub dev: PathBuf,
    pub config: RunConfig,
}

impl Fixture {
    pub fn new(dir: &Path, seed: u64) -> Self {
        let mut rng = rng(seed);
        let vocab = Vocabulary::new(&mut rng, 150);
        let write = |name: &str, text: &str| {
            let p = dir.join(name);
            fs::write(&p, text).unwrap();
            p
        };
        let train = write("train.tsv", &labeled_corpus(&mut rng, &vocab, "train", 300));
        let dev_text = labeled_corpus(&mut rng, &vocab, "dev", 120);
        let dev = write("dev.tsv", &dev_text);

        let mut freq = String::new();
        for (i, w) in vocab.words.iter().enumerate() {
            let _ = writeln!(freq, "{w}\t{}", 10_000 / (i + 1) + 1);
        }
        let freq = write("freq.tsv", &freq);

        let mut analyzer = String::new();
        let mut lexicon = String::new();
        for (i, w) in vocab.words.iter().enumerate() {
            let lemma = format!("l{}", i / 2);
            let _ = writeln!(analyzer, "{w}\t{lemma}\tnoun\t-0.1");
            if rng.gen_bool(0.3) {
                let _ = writeln!(analyzer, "{w}\t{lemma}x\tverb\t-0.1");
            }
            if i % 2 == 0 && rng.gen_bool(0.6) {
                let level = if rng.gen_bool(0.8) { vocab.levels[i] } else { rng.gen_range(3..=5) };
                let _ = writeln!(lexicon, "{lemma}\tnoun\t{level}");
            }
        }
        let analyzer = write("analyzer.tsv", &analyzer);
        let lexicon = write("lexicon.tsv", &lexicon);

        let mut preds = String::new();
        for line in dev_text.lines() {
            let fields: Vec<&str> = line.split('\t').collect();
            for (w, token) in fields[2].split(' ').enumerate() {
                if rng.gen_bool(0.05) {
                    continue;
                }
                let gold: u8 = token.rsplit_once('|').unwrap().1.parse().unwrap();
                for s in 0..rng.gen_range(1..=2) {
                    let level = if rng.gen_bool(0.75) { gold } else { rng.gen_range(3..=5) };
                    let _ = writeln!(preds, "{}\t{}\t{w}\t{s}\t{level}", fields[0], fields[1]);
                }
            }
        }
        let predictions = write("preds.tsv", &preds);

        let base = RunConfig { normalize: Some(false), ..RunConfig::default() };
        let mle = dir.join("mle.tsv");
        cmd_build(&BuildKind::Mle { train: train.clone() }, &mle, &base).unwrap();
        let dist = dir.join("dist.tsv");
        let kind = BuildKind::DistFreq { freq: freq.clone(), fractions: None, train: Some(train.clone()), mass: MassMode::Tokens };
        cmd_build(&kind, &dist, &base).unwrap();
        let ex = dir.join("ex.tsv");
        cmd_build(&BuildKind::ExFreq { freq, train: train.clone(), bins: Some(40) }, &ex, &base).unwrap();

        let config = RunConfig {
            mle: Some(mle),
            lexicon: Some(lexicon),
            analyzer: Some(analyzer),
            dist_freq: Some(dist),
            ex_freq: Some(ex),
            predictions: Some(predictions),
            ..base
        };
        Fixture { dir: dir.to_path_buf(), train, dev, config }
    }
}

/// Shuffled copy of `items`.
pub fn shuffled<T: Clone>(rng: &mut impl Rng, items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(rng);
    v
}
