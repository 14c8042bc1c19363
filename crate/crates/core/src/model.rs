//! Sparse linear model over string-keyed indicator features.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::grammar::{factor_entry, LexicalEntry, Lexicon, Rule};

/// A sparse vector keyed by feature name. Never stores explicit zeros.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeatureVector {
    values: BTreeMap<String, f64>,
}

impl FeatureVector {
    pub fn new() -> FeatureVector {
        FeatureVector::default()
    }

    pub fn get(&self, key: &str) -> f64 {
        self.values.get(key).copied().unwrap_or(0.0)
    }

    /// Adds `value` to the entry for `key`, dropping it if it becomes zero.
    pub fn add(&mut self, key: &str, value: f64) {
        if value == 0.0 {
            return;
        }
        match self.values.get_mut(key) {
            Some(v) => {
                *v += value;
                if *v == 0.0 {
                    self.values.remove(key);
                }
            }
            None => {
                self.values.insert(key.to_string(), value);
            }
        }
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, other: &FeatureVector, scale: f64) {
        for (k, v) in &other.values {
            self.add(k, scale * v);
        }
    }

    pub fn plus(&self, other: &FeatureVector) -> FeatureVector {
        let mut out = self.clone();
        out.add_scaled(other, 1.0);
        out
    }

    pub fn minus(&self, other: &FeatureVector) -> FeatureVector {
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        out
    }

    pub fn scaled(&self, scale: f64) -> FeatureVector {
        let mut out = FeatureVector::new();
        out.add_scaled(self, scale);
        out
    }

    pub fn dot(&self, other: &FeatureVector) -> f64 {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .values
            .iter()
            .map(|(k, v)| v * large.get(k))
            .sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.values().map(|v| v.abs()).sum()
    }

    pub fn squared_norm(&self) -> f64 {
        self.values.values().map(|v| v * v).sum()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl FromIterator<(String, f64)> for FeatureVector {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        let mut fv = FeatureVector::new();
        for (k, v) in iter {
            fv.add(&k, v);
        }
        fv
    }
}

pub fn dot(weights: &FeatureVector, fv: &FeatureVector) -> f64 {
    weights.dot(fv)
}

/// Which feature families are extracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FeatureConfig {
    pub lex: bool,
    pub lexeme: bool,
    pub template: bool,
    pub rule: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            lex: true,
            lexeme: true,
            template: true,
            rule: true,
        }
    }
}

impl FeatureConfig {
    /// Parses a comma-separated family list (`lex,lexeme,template,rule`).
    pub fn from_names(list: &str) -> Result<FeatureConfig, String> {
        let mut cfg = FeatureConfig {
            lex: false,
            lexeme: false,
            template: false,
            rule: false,
        };
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "lex" => cfg.lex = true,
                "lexeme" => cfg.lexeme = true,
                "template" => cfg.template = true,
                "rule" => cfg.rule = true,
                other => return Err(format!("unknown feature family `{}`", other)),
            }
        }
        Ok(cfg)
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.lex {
            out.push("lex");
        }
        if self.lexeme {
            out.push("lexeme");
        }
        if self.template {
            out.push("template");
        }
        if self.rule {
            out.push("rule");
        }
        out
    }
}

pub fn lex_feature(entry: &LexicalEntry) -> String {
    format!("LEX#{}#{}", entry.tokens().join(" "), entry.category().canonical())
}

/// Features of a lexical step, restricted to the active families.
pub fn lexical_step_features(entry: &LexicalEntry, config: &FeatureConfig) -> FeatureVector {
    let mut fv = FeatureVector::new();
    if config.lex {
        fv.add(&lex_feature(entry), 1.0);
    }
    if config.lexeme || config.template {
        let (lexeme, template) = factor_entry(entry);
        if config.lexeme {
            fv.add(
                &format!("LXM#{}#{}", lexeme.tokens.join(" "), lexeme.constant_names()),
                1.0,
            );
        }
        if config.template {
            fv.add(&format!("TMPL#{}", template.canonical()), 1.0);
        }
    }
    fv
}

pub fn rule_step_features(rule: Rule, config: &FeatureConfig) -> FeatureVector {
    let mut fv = FeatureVector::new();
    if config.rule {
        fv.add(&format!("RULE#{}", rule.name()), 1.0);
    }
    fv
}

/// Weights plus the active feature families. Scores decompose over
/// derivation steps.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Model {
    pub weights: FeatureVector,
    pub features: FeatureConfig,
}

impl Model {
    pub fn new(features: FeatureConfig) -> Model {
        Model {
            weights: FeatureVector::new(),
            features,
        }
    }

    /// Sets the LEX weight of every entry in `seed` to `prior`. No-op when
    /// the LEX family is off.
    pub fn with_seed_prior(mut self, seed: &Lexicon, prior: f64) -> Model {
        if self.features.lex && prior != 0.0 {
            for e in seed.entries() {
                let key = lex_feature(e);
                let current = self.weights.get(&key);
                self.weights.add(&key, prior - current);
            }
        }
        self
    }

    pub fn score(&self, fv: &FeatureVector) -> f64 {
        self.weights.dot(fv)
    }

    pub fn lexical_features(&self, entry: &LexicalEntry) -> FeatureVector {
        lexical_step_features(entry, &self.features)
    }

    pub fn rule_features(&self, rule: Rule) -> FeatureVector {
        rule_step_features(rule, &self.features)
    }

    /// `weights += scale * direction`
    pub fn update(&mut self, direction: &FeatureVector, scale: f64) {
        debug_assert!(scale.is_finite());
        self.weights.add_scaled(direction, scale);
    }

    /// One `key<TAB>weight` line per feature, keys sorted, weights with 17
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.weights.iter() {
            let _ = writeln!(out, "{}\t{:.16e}", k, v);
        }
        out
    }

    pub fn parse(text: &str, features: FeatureConfig) -> Result<Model, ModelError> {
        let mut weights = FeatureVector::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: &str| ModelError {
                line: idx + 1,
                message: message.to_string(),
            };
            let (key, value) = line
                .rsplit_once('\t')
                .ok_or_else(|| err("expected `key<TAB>weight`"))?;
            if key.is_empty() {
                return Err(err("empty feature key"));
            }
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| err(&format!("bad weight `{}`", value)))?;
            if !value.is_finite() {
                return Err(err("non-finite weight"));
            }
            if weights.get(key) != 0.0 {
                return Err(err(&format!("duplicate feature `{}`", key)));
            }
            weights.add(key, value);
        }
        Ok(Model { weights, features })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("model line {line}: {message}")]
pub struct ModelError {
    pub line: usize,
    pub message: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{Origin, SyntaxInventory};
    use crate::logic::Ontology;
    use proptest::prelude::*;

    fn fv(pairs: &[(&str, f64)]) -> FeatureVector {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn dot_products() {
        assert_eq!(dot(&FeatureVector::new(), &fv(&[("a", 3.0)])), 0.0);
        assert_eq!(dot(&fv(&[("a", 2.0)]), &fv(&[("a", 3.0), ("b", 1.0)])), 6.0);
    }

    #[test]
    fn updates_drop_zeros() {
        let mut m = Model::default();
        m.update(&fv(&[("a", 1.0)]), 1.0);
        assert_eq!(m.weights, fv(&[("a", 1.0)]));
        m.update(&fv(&[("a", 1.0)]), -1.0);
        assert!(m.weights.is_empty());
        assert!(fv(&[("z", 0.0)]).is_empty());
    }

    #[test]
    fn step_features() {
        let e = LexicalEntry::parse(
            "texas :- NP : texas:e",
            &mut Ontology::permissive(),
            &SyntaxInventory::default(),
            Origin::Seed,
        )
        .unwrap();
        let f = lexical_step_features(&e, &FeatureConfig::default());
        assert_eq!(
            f,
            fv(&[
                ("LEX#texas#NP : texas:e", 1.0),
                ("LXM#texas#texas", 1.0),
                ("TMPL#NP:#0", 1.0)
            ])
        );
        assert_eq!(
            rule_step_features(Rule::ForwardApplication, &FeatureConfig::default()),
            fv(&[("RULE#fa", 1.0)])
        );
        let only_rule = FeatureConfig::from_names("rule").unwrap();
        assert!(lexical_step_features(&e, &only_rule).is_empty());
        assert!(FeatureConfig::from_names("lex,bogus").is_err());
    }

    #[test]
    fn seed_prior() {
        let lex = Lexicon::parse("texas :- NP : texas:e\n", &mut Ontology::permissive()).unwrap();
        let m = Model::new(FeatureConfig::default()).with_seed_prior(&lex, 1.0);
        assert_eq!(m.weights.get("LEX#texas#NP : texas:e"), 1.0);
        assert_eq!(m.weights.len(), 1);
    }

    #[test]
    fn file_format() {
        assert_eq!(Model::default().to_text(), "");
        assert_eq!(Model::parse("", FeatureConfig::default()).unwrap(), Model::default());
        let m = Model {
            weights: fv(&[("b", -0.5), ("a", 1.0), ("c d#x", 2.25)]),
            features: FeatureConfig::default(),
        };
        let text = m.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("a\t"));
        assert!(lines[2].starts_with("c d#x\t"));
        assert_eq!(Model::parse(&text, FeatureConfig::default()).unwrap(), m);
        let err = Model::parse("a\t1\nbroken\n", FeatureConfig::default()).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(Model::parse("a\tx\n", FeatureConfig::default()).is_err());
    }

    fn sparse() -> impl Strategy<Value = FeatureVector> {
        proptest::collection::vec(("[a-e]", -5i32..5), 0..6)
            .prop_map(|v| v.into_iter().map(|(k, x)| (k, x as f64)).collect())
    }

    proptest! {
        #[test]
        fn dot_is_linear(u in sparse(), v in sparse(), w in sparse()) {
            let lhs = dot(&u, &v.plus(&w));
            let rhs = dot(&u, &v) + dot(&u, &w);
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }

        #[test]
        fn updates_commute_with_sum(dirs in proptest::collection::vec(sparse(), 1..5)) {
            let mut stepwise = Model::default();
            let mut total = FeatureVector::new();
            for d in &dirs {
                stepwise.update(d, 1.0);
                total = total.plus(d);
            }
            let mut once = Model::default();
            once.update(&total, 1.0);
            prop_assert_eq!(stepwise.weights, once.weights);
        }

        #[test]
        fn save_load_bit_exact(pairs in proptest::collection::vec(("[a-z#]{1,8}", any::<f64>()), 0..20)) {
            let weights: FeatureVector = pairs
                .into_iter()
                .filter(|(_, v)| v.is_finite())
                .collect();
            let m = Model { weights, features: FeatureConfig::default() };
            let back = Model::parse(&m.to_text(), FeatureConfig::default()).unwrap();
            for ((k1, v1), (k2, v2)) in m.weights.iter().zip(back.weights.iter()) {
                prop_assert_eq!(k1, k2);
                prop_assert_eq!(v1.to_bits(), v2.to_bits());
            }
            prop_assert_eq!(m.weights.len(), back.weights.len());
        }
    }
}
