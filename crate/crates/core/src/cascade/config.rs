//! Line-oriented cascade definitions:
//!
//! ```text
//! # comment
//! tuned = mle(min_prob=0.85) -> lex -> external(preds=bert.tsv) -> default3
//! ```
//!
//! Layers: `mle(min_prob, min_count, table)`, `lex`, `dist_freq(table)`,
//! `ex_freq(table)`, `external(preds)` (alias `bert`), and `default(level)`
//! with the shorthands `default3`/`default4`/`default5`.

use std::collections::HashSet;
use std::io::BufRead;

use super::{enumerate_combinations, standalone_models, CascadeSpec, Layer, LayerSpec};
use crate::error::{Error, Result};
use crate::level::ReadabilityLevel;

fn invalid(message: String) -> Error {
    Error::InvalidCascade(message)
}

fn parse_layer(text: &str) -> Result<LayerSpec> {
    let text = text.trim();
    let (head, params) = match text.find('(') {
        Some(open) => {
            let inner = text[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| invalid(format!("unclosed parameter list in {text:?}")))?;
            (text[..open].trim(), inner)
        }
        None => (text, ""),
    };
    let mut pairs = Vec::new();
    for param in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = param
            .split_once('=')
            .ok_or_else(|| invalid(format!("parameter {param:?} is not key=value")))?;
        pairs.push((k.trim(), v.trim()));
    }
    let mut take = |key: &str| -> Option<String> {
        let pos = pairs.iter().position(|(k, _)| *k == key)?;
        Some(pairs.remove(pos).1.to_owned())
    };
    let head = head.to_ascii_lowercase().replace('-', "_");
    let spec = match head.as_str() {
        "mle" | "tuned_mle" => {
            let min_prob = match take("min_prob") {
                Some(v) => v.parse().map_err(|_| invalid(format!("bad min_prob {v:?}")))?,
                None => 0.0,
            };
            let min_count = match take("min_count") {
                Some(v) => v.parse().map_err(|_| invalid(format!("bad min_count {v:?}")))?,
                None => 0,
            };
            LayerSpec { layer: Layer::Mle { min_prob, min_count }, source: take("table") }
        }
        "lex" => Layer::Lex.into(),
        "dist_freq" => LayerSpec { layer: Layer::DistFreq, source: take("table") },
        "ex_freq" => LayerSpec { layer: Layer::ExFreq, source: take("table") },
        "external" | "bert" => LayerSpec { layer: Layer::External, source: take("preds") },
        "default" => {
            let level = take("level").ok_or_else(|| invalid("default needs level=3|4|5".into()))?;
            Layer::Default(level.parse()?).into()
        }
        "default3" | "l3" => Layer::Default(ReadabilityLevel::L3).into(),
        "default4" | "l4" => Layer::Default(ReadabilityLevel::L4).into(),
        "default5" | "l5" => Layer::Default(ReadabilityLevel::L5).into(),
        other => return Err(invalid(format!("unknown layer {other:?}"))),
    };
    if let Some((k, _)) = pairs.first() {
        return Err(invalid(format!("unknown parameter {k:?} for layer {head}")));
    }
    Ok(spec)
}

/// Parses `layer -> layer -> ...` into a total cascade named `name`.
pub fn parse_cascade_expr(name: &str, expr: &str) -> Result<CascadeSpec> {
    let layers = expr.split("->").map(parse_layer).collect::<Result<Vec<_>>>()?;
    CascadeSpec::new(name, layers)
}

pub fn parse_cascade_file<R: BufRead>(source: R) -> Result<Vec<CascadeSpec>> {
    let mut specs = Vec::new();
    let mut names = HashSet::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, expr) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, "expected name = layer -> layer ..."))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::parse(line_no, "empty cascade name"));
        }
        let spec = parse_cascade_expr(name, expr).map_err(|e| Error::parse(line_no, e.to_string()))?;
        if !names.insert(name.to_owned()) {
            return Err(Error::parse(line_no, format!("cascade {name:?} defined twice")));
        }
        specs.push(spec);
    }
    Ok(specs)
}

fn canonical(name: &str) -> String {
    name.replace("->", "→").split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Finds a cascade by name among `defined`, then the built-in names
/// (`default3`..`default5`, the 24 combinations, the standalone models),
/// and finally parses `query` as an inline expression.
pub fn resolve_cascade(query: &str, defined: &[CascadeSpec]) -> Result<CascadeSpec> {
    if let Some(spec) = defined.iter().find(|s| s.name() == query) {
        return Ok(spec.clone());
    }
    let wanted = canonical(query);
    for level in ReadabilityLevel::ALL {
        if wanted == format!("default{level}") {
            return CascadeSpec::new(query, vec![Layer::Default(level).into()]);
        }
    }
    if let Some(spec) = enumerate_combinations()
        .into_iter()
        .chain(standalone_models())
        .find(|s| canonical(s.name()) == wanted)
    {
        return Ok(spec);
    }
    parse_cascade_expr(query, query)
        .map_err(|e| invalid(format!("{query:?} is neither a known cascade nor a valid expression ({e})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ReadabilityLevel::*;

    #[test]
    fn parses_file() {
        let text = "# demo\ntuned = mle(min_prob=0.85) -> lex -> external(preds=bert.tsv) -> default3\n\nfreq = ex-freq(table=ex.tsv)\n";
        let specs = parse_cascade_file(text.as_bytes()).unwrap();
        assert_eq!(specs.len(), 2);
        let tuned = &specs[0];
        assert_eq!(tuned.name(), "tuned");
        assert_eq!(tuned.layers()[0].layer, Layer::Mle { min_prob: 0.85, min_count: 0 });
        assert_eq!(tuned.layers()[2].source.as_deref(), Some("bert.tsv"));
        assert_eq!(specs[1].layers()[0], LayerSpec { layer: Layer::ExFreq, source: Some("ex.tsv".into()) });
    }

    #[test]
    fn expression_round_trip() {
        let spec = parse_cascade_expr("x", "mle(min_prob=0.85, min_count=2) -> lex -> default(level=4)").unwrap();
        assert_eq!(spec.layers()[2].layer, Layer::Default(L4));
        let again = parse_cascade_expr("x", &spec.expression()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(parse_cascade_expr("x", "mle -> lex").is_err());
        assert!(parse_cascade_expr("x", "mle(min_prob=abc) -> default3").is_err());
        assert!(parse_cascade_expr("x", "mle(bogus=1) -> default3").is_err());
        assert!(parse_cascade_expr("x", "wat -> default3").is_err());
        assert!(parse_cascade_expr("x", "mle(min_prob=0.5 -> default3").is_err());
        assert!(parse_cascade_file("a = default3\na = default4\n".as_bytes()).is_err());
        assert!(matches!(parse_cascade_file("nonsense\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn resolves_builtins() {
        let d = resolve_cascade("default3", &[]).unwrap();
        assert_eq!(d.layers().len(), 1);
        assert_eq!(resolve_cascade("MLE -> Lex -> BERT", &[]).unwrap().name(), "MLE → Lex → BERT");
        assert_eq!(resolve_cascade("lex -> default5", &[]).unwrap().layers()[1].layer, Layer::Default(L5));
        let mine = parse_cascade_expr("mine", "default4").unwrap();
        assert_eq!(resolve_cascade("mine", std::slice::from_ref(&mine)).unwrap(), mine);
        assert!(resolve_cascade("lex", &[]).is_err());
    }
}
