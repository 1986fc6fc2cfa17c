use approx::assert_relative_eq;
use proptest::prelude::*;
use readlevel::alignment::{align_words, alignment_cost, char_edit_distance, derive_word_labels, substitution_cost};
use readlevel::cascade::{default_threshold_grid, parse_cascade_expr, tune_mle_threshold};
use readlevel::corpus::{parse_labeled, write_corpus, ParseOptions};
use readlevel::eval::{error_combinations, evaluate, WordErrorBucket};
use readlevel::taggers::MleTable;
use readlevel::{
    Cascade, CascadeSpec, Corpus, EvalReport, Fragment, Granularity, Layer, ParallelFragment, ReadabilityLevel,
    Resources, Split, TagTrace, Token, WordDecision,
};
use ReadabilityLevel::*;

/// Textbook full-matrix Levenshtein.
fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

/// Minimum cost over every monotone alignment, by exhaustive recursion.
fn brute_min_cost(src: &[String], tgt: &[String]) -> f64 {
    match (src.split_first(), tgt.split_first()) {
        (None, None) => 0.0,
        (Some(_), None) => src.len() as f64,
        (None, Some(_)) => tgt.len() as f64,
        (Some((s, rest_s)), Some((t, rest_t))) => {
            let pair = if s == t { 0.0 } else { levenshtein(s, t) as f64 / s.chars().count().max(t.chars().count()) as f64 };
            let paired = pair + brute_min_cost(rest_s, rest_t);
            let deleted = 1.0 + brute_min_cost(rest_s, tgt);
            let inserted = 1.0 + brute_min_cost(src, rest_t);
            paired.min(deleted).min(inserted)
        }
    }
}

fn word() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "ab", "b", "ba", "abc", "kataba", "katab", "c"]).prop_map(str::to_owned)
}

fn level() -> impl Strategy<Value = ReadabilityLevel> {
    prop::sample::select(ReadabilityLevel::ALL.to_vec())
}

proptest! {
    #[test]
    fn alignment_cost_is_minimal(src in prop::collection::vec(word(), 1..5), tgt in prop::collection::vec(word(), 1..5)) {
        let links = align_words(&src, &tgt).unwrap();
        assert_relative_eq!(alignment_cost(&src, &tgt, &links), brute_min_cost(&src, &tgt), epsilon = 1e-9);
        let src_seen: Vec<usize> = links.iter().filter_map(|l| l.src_index).collect();
        let tgt_seen: Vec<usize> = links.iter().filter_map(|l| l.tgt_index).collect();
        prop_assert_eq!(src_seen, (0..src.len()).collect::<Vec<_>>());
        prop_assert_eq!(tgt_seen, (0..tgt.len()).collect::<Vec<_>>());
    }

    #[test]
    fn char_distance_matches_full_matrix(a in "[ab\u{0627}\u{0628}]{0,6}", b in "[ab\u{0627}\u{0628}]{0,6}") {
        prop_assert_eq!(char_edit_distance(&a, &b), levenshtein(&a, &b));
        let c = substitution_cost(&a, &b);
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert_eq!(c == 0.0, a == b);
    }

    #[test]
    fn identity_triples_are_all_level_3(words in prop::collection::vec(word(), 1..8)) {
        let f = || Fragment::from_surfaces("d", "f", &words).unwrap();
        let labeled = derive_word_labels(&ParallelFragment::new(f(), f(), f()).unwrap()).unwrap();
        prop_assert!(labeled.word_labels.iter().all(|l| *l == L3));
        prop_assert_eq!(labeled.fragment_label, L3);
    }

    #[test]
    fn labeled_corpus_round_trips(frags in prop::collection::vec(prop::collection::vec((word(), level()), 1..6), 1..10)) {
        let fragments: Vec<Fragment> = frags
            .iter()
            .enumerate()
            .map(|(i, toks)| {
                let tokens = toks.iter().map(|(w, l)| Token::new(w.clone(), Some(*l)).unwrap()).collect();
                Fragment::new("doc", i.to_string(), tokens, None).unwrap()
            })
            .collect();
        let corpus = Corpus::new(Split::Dev, fragments).unwrap();
        let mut bytes = Vec::new();
        write_corpus(&corpus, &mut bytes).unwrap();
        let back = parse_labeled(bytes.as_slice(), ParseOptions::default()).unwrap();
        prop_assert_eq!(back.fragments(), corpus.fragments());
    }

    /// A default-L cascade on a corpus whose level-L share is p scores
    /// accuracy p and F1(L) = 2p / (1 + p).
    #[test]
    fn default_level_closed_form(counts in prop::array::uniform3(0usize..60), target in level()) {
        prop_assume!(counts.iter().sum::<usize>() > 0);
        let mut tokens = Vec::new();
        for (l, n) in ReadabilityLevel::ALL.into_iter().zip(counts) {
            tokens.extend((0..n).map(|i| Token::new(format!("{l}_{i}"), Some(l)).unwrap()));
        }
        let fragments = tokens.into_iter().enumerate().map(|(i, t)| Fragment::new("d", i.to_string(), vec![t], None).unwrap()).collect();
        let gold = Corpus::new(Split::Dev, fragments).unwrap();
        let spec = CascadeSpec::from_layers(&[Layer::Default(target)]).unwrap();
        let resources = Resources::default();
        let traces = Cascade::bind(&spec, &resources).unwrap().tag_corpus(&gold).unwrap();
        let r: EvalReport = evaluate(&traces, &gold, Granularity::Word).unwrap();
        let p = counts[target.index()] as f64 / counts.iter().sum::<usize>() as f64;
        assert_relative_eq!(r.accuracy, 100.0 * p, epsilon = 1e-9);
        assert_relative_eq!(r.f1_of(target), 100.0 * 2.0 * p / (1.0 + p), epsilon = 1e-9);
        assert_relative_eq!(r.macro_f1, r.f1_of(target) / 3.0, epsilon = 1e-9);
    }
}

fn dev_corpus(words: &[(&str, ReadabilityLevel, usize)]) -> Corpus {
    let mut fragments = Vec::new();
    for (w, l, n) in words {
        for _ in 0..*n {
            let id = fragments.len().to_string();
            fragments.push(Fragment::new("dev", id, vec![Token::new(*w, Some(*l)).unwrap()], None).unwrap());
        }
    }
    Corpus::new(Split::Dev, fragments).unwrap()
}

#[test]
fn probability_floor_beats_plain_mle() {
    // "a" leans to 4 in training (3 of 5) but is level 3 on dev
    let mle = MleTable::from_counts([
        ("a".to_owned(), [2, 3, 0]),
        ("b".to_owned(), [0, 10, 0]),
        ("c".to_owned(), [0, 0, 9]),
    ]);
    let resources = Resources { mle: Some(mle), ..Resources::default() };
    let dev = dev_corpus(&[("a", L3, 10), ("b", L4, 5), ("c", L5, 5)]);
    let template = parse_cascade_expr("t", "mle -> default3").unwrap();

    let result = tune_mle_threshold(&template, &resources, &dev, &[0.85, 0.0]).unwrap();
    assert_eq!(result.best, 0.85);
    assert_eq!(result.scores.len(), 2);
    assert_eq!(result.scores[0].0, 0.0);
    assert!(result.scores[1].1 > result.scores[0].1);
    assert_relative_eq!(result.scores[1].1, 100.0, epsilon = 1e-9);

    // over the default grid every floor above 0.6 is perfect; the lowest wins
    let grid = default_threshold_grid();
    assert_eq!(grid.len(), 11);
    let result = tune_mle_threshold(&template, &resources, &dev, &grid).unwrap();
    assert_eq!(result.best, 0.65);
}

#[test]
fn correct_fragment_with_one_word_error() {
    let gold = parse_labeled("d\t1\ta|3 b|5\nd\t2\tc|3\n".as_bytes(), ParseOptions::default()).unwrap();
    let decision = |s: &str, level| WordDecision { surface: s.to_owned(), level, layer: 0 };
    let preds = vec![
        TagTrace::new("d", "1", vec![decision("a", L4), decision("b", L5)]).unwrap(),
        TagTrace::new("d", "2", vec![decision("c", L3)]).unwrap(),
    ];
    let t = error_combinations::<f64, _>(&preds, &gold).unwrap();
    assert_eq!(t.total, 2);
    assert_eq!(t.count(true, WordErrorBucket::One), 1);
    assert_eq!(t.count(true, WordErrorBucket::Zero), 1);
    assert_eq!(t.rows.iter().map(|r| r.count).sum::<usize>(), 2);
}

#[test]
fn reports_agree_across_scalar_types() {
    let gold = parse_labeled("d\t1\ta|3 b|4\nd\t2\tc|5 d|3\n".as_bytes(), ParseOptions::default()).unwrap();
    let decision = |s: &str, level| WordDecision { surface: s.to_owned(), level, layer: 0 };
    let preds = vec![
        TagTrace::new("d", "1", vec![decision("a", L3), decision("b", L5)]).unwrap(),
        TagTrace::new("d", "2", vec![decision("c", L5), decision("d", L3)]).unwrap(),
    ];
    let wide: EvalReport = evaluate(&preds, &gold, Granularity::Word).unwrap();
    let narrow = evaluate::<f32, _>(&preds, &gold, Granularity::Word).unwrap();
    for (a, b) in wide.f1.iter().zip(narrow.f1) {
        assert_relative_eq!(*a, f64::from(b), epsilon = 1e-4);
    }
    assert_relative_eq!(wide.accuracy, 75.0);
}
