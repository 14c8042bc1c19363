//! Lexicon and parameter learning: a supervised perceptron with GENLEX, a
//! validation-driven weakly supervised trainer, and exact-match evaluation.

mod supervised;
mod weak;

use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

pub use supervised::train_supervised;
pub use weak::train_validation_driven;

use crate::chart::{complete_parses, parse_chart, ParseOptions, ParseResult};
use crate::grammar::{LexicalSource, Lexicon, Syntax};
use crate::induction::{GenlexConfig, SplitConstraints};
use crate::logic::Expr;
use crate::model::{FeatureConfig, FeatureVector, Model};

/// A sentence paired with its labeled logical form.
#[derive(Clone, Debug)]
pub struct SupervisedExample {
    pub tokens: Vec<String>,
    pub labeled_lf: Expr,
}

impl SupervisedExample {
    pub fn new(tokens: Vec<String>, labeled_lf: Expr) -> SupervisedExample {
        SupervisedExample { tokens, labeled_lf }
    }
}

/// A deterministic predicate over complete parses.
pub trait Validator: Send + Sync {
    fn validate(&self, parse: &ParseResult) -> Result<bool, String>;
}

/// Accepts parses whose logical form is alpha-equivalent to a target.
#[derive(Clone, Debug)]
pub struct LfEqual(pub Expr);

impl Validator for LfEqual {
    fn validate(&self, parse: &ParseResult) -> Result<bool, String> {
        Ok(parse.logical_form.alpha_equal(&self.0))
    }
}

/// Adapts a closure into a validator.
pub struct FnValidator<F>(pub F);

impl<F> Validator for FnValidator<F>
where
    F: Fn(&ParseResult) -> Result<bool, String> + Send + Sync,
{
    fn validate(&self, parse: &ParseResult) -> Result<bool, String> {
        (self.0)(parse)
    }
}

/// A sentence with a validator, plus any logical forms known to be
/// candidates for it (used to drive GENLEX; may be empty).
#[derive(Clone)]
pub struct ValidationExample {
    pub tokens: Vec<String>,
    pub validator: Arc<dyn Validator>,
    pub candidate_lfs: Vec<Expr>,
}

impl ValidationExample {
    pub fn new(tokens: Vec<String>, validator: Arc<dyn Validator>) -> ValidationExample {
        ValidationExample {
            tokens,
            validator,
            candidate_lfs: Vec::new(),
        }
    }

    /// Validation by logical-form equality; the target doubles as the
    /// GENLEX candidate.
    pub fn lf_equal(tokens: Vec<String>, lf: Expr) -> ValidationExample {
        ValidationExample {
            tokens,
            validator: Arc::new(LfEqual(lf.clone())),
            candidate_lfs: vec![lf],
        }
    }
}

impl From<&SupervisedExample> for ValidationExample {
    fn from(ex: &SupervisedExample) -> Self {
        ValidationExample::lf_equal(ex.tokens.clone(), ex.labeled_lf.clone())
    }
}

impl fmt::Debug for ValidationExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValidationExample")
            .field("tokens", &self.tokens)
            .field("candidate_lfs", &self.candidate_lfs)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainParams {
    pub epochs: usize,
    pub beam: Option<usize>,
    pub margin: f64,
    pub learning_rate: f64,
    pub genlex: GenlexConfig,
    pub split: SplitConstraints,
    /// Valid parses whose entries are kept, and averaged over in the weak
    /// update.
    pub k_best: usize,
    pub max_lexical_span: usize,
    pub root_syntaxes: Vec<Syntax>,
    pub seed_prior: f64,
    pub features: FeatureConfig,
}

impl Default for TrainParams {
    fn default() -> Self {
        let parse = ParseOptions::default();
        TrainParams {
            epochs: 10,
            beam: parse.beam,
            margin: 1.0,
            learning_rate: 1.0,
            genlex: GenlexConfig::default(),
            split: SplitConstraints::default(),
            k_best: 10,
            max_lexical_span: parse.max_lexical_span,
            root_syntaxes: parse.root_syntaxes,
            seed_prior: 1.0,
            features: FeatureConfig::default(),
        }
    }
}

impl TrainParams {
    pub fn parse_options(&self) -> ParseOptions {
        ParseOptions {
            beam: self.beam,
            max_lexical_span: self.max_lexical_span,
            root_syntaxes: self.root_syntaxes.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        let bad = |m: &str| Err(LearnError::InvalidParams(m.to_string()));
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if self.margin.is_nan() || self.margin < 0.0 {
            return bad("margin must be non-negative");
        }
        if self.beam == Some(0) {
            return bad("beam must be positive");
        }
        if self.k_best == 0 {
            return bad("k_best must be positive");
        }
        if self.genlex.max_span == 0 || self.genlex.max_entries_per_example == 0 {
            return bad("genlex limits must be positive");
        }
        if self.root_syntaxes.is_empty() {
            return bad("at least one root syntax is required");
        }
        Ok(())
    }

    pub(crate) fn initial_model(&self, seed: &Lexicon) -> Model {
        Model::new(self.features).with_seed_prior(seed, self.seed_prior)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LearnError {
    #[error("training data is empty")]
    EmptyData,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("validator failed on example {index}: {message}")]
    Validator { index: usize, message: String },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EpochStats {
    pub epoch: usize,
    /// Examples with at least one complete parse under the persistent
    /// lexicon.
    pub parsed: usize,
    /// Examples whose top parse was correct before any update.
    pub correct: usize,
    pub updates: usize,
    /// Persistent lexicon size at the end of the epoch.
    pub lexicon: usize,
    /// Examples with no correct parse reachable.
    pub unreachable: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainReport {
    pub epochs: Vec<EpochStats>,
    /// Top-parse correctness on the training data after the last epoch.
    pub final_correct: usize,
    pub final_parsed: usize,
    pub n: usize,
}

impl TrainReport {
    pub fn total_updates(&self) -> usize {
        self.epochs.iter().map(|e| e.updates).sum()
    }

    pub fn total_unreachable(&self) -> usize {
        self.epochs.iter().map(|e| e.unreachable).sum()
    }

    pub fn final_accuracy(&self) -> f64 {
        ratio(self.final_correct, self.n)
    }

    /// One line per epoch, then a line for the final training pass.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for e in &self.epochs {
            let _ = writeln!(
                out,
                "epoch {}: parsed={} correct={} updates={} lexicon={}",
                e.epoch, e.parsed, e.correct, e.updates, e.lexicon
            );
        }
        let _ = writeln!(
            out,
            "final: parsed={} correct={} n={} unreachable={}",
            self.final_parsed,
            self.final_correct,
            self.n,
            self.total_unreachable()
        );
        out
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub tokens: Vec<String>,
    pub gold: Expr,
    pub predicted: Option<Expr>,
    pub score: Option<f64>,
    pub correct: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Metrics {
    pub n: usize,
    pub correct: usize,
    pub parsed: usize,
    pub accuracy: f64,
    pub coverage: f64,
    pub outcomes: Vec<Outcome>,
}

impl Metrics {
    /// One tab-separated line per example: index, correct/wrong/noparse,
    /// sentence, gold, prediction.
    pub fn outcomes_text(&self) -> String {
        let mut out = String::new();
        for (i, o) in self.outcomes.iter().enumerate() {
            let status = match (&o.predicted, o.correct) {
                (None, _) => "noparse",
                (Some(_), true) => "correct",
                (Some(_), false) => "wrong",
            };
            let predicted = o.predicted.as_ref().map_or_else(|| "-".to_string(), |e| e.to_string());
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                i,
                status,
                o.tokens.join(" "),
                o.gold,
                predicted
            );
        }
        out
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub(crate) fn parse(
    tokens: &[String],
    lexicon: &dyn LexicalSource,
    model: &Model,
    options: &ParseOptions,
) -> Vec<ParseResult> {
    let chart = parse_chart(tokens, lexicon, model, options);
    complete_parses(&chart, &options.root_syntaxes)
}

/// Applies a perceptron step and, in debug builds, checks the margin of the
/// involved pair grew by `rate * |direction|^2`.
pub(crate) fn apply_update(model: &mut Model, direction: &FeatureVector, rate: f64) {
    let before = model.score(direction);
    model.update(direction, rate);
    if cfg!(debug_assertions) {
        let after = model.score(direction);
        let expected = rate * direction.squared_norm();
        let tolerance = 1e-9 * (1.0 + expected.abs() + before.abs());
        debug_assert!(
            ((after - before) - expected).abs() <= tolerance,
            "margin grew by {} instead of {}",
            after - before,
            expected
        );
    }
}

/// Exact-match evaluation of the top parse against each label.
pub fn evaluate(
    model: &Model,
    lexicon: &Lexicon,
    test: &[SupervisedExample],
    options: &ParseOptions,
) -> Metrics {
    let mut metrics = Metrics {
        n: test.len(),
        ..Metrics::default()
    };
    for ex in test {
        let results = parse(&ex.tokens, lexicon, model, options);
        let top = results.first();
        let correct = top.is_some_and(|r| r.logical_form.alpha_equal(&ex.labeled_lf));
        metrics.parsed += usize::from(top.is_some());
        metrics.correct += usize::from(correct);
        metrics.outcomes.push(Outcome {
            tokens: ex.tokens.clone(),
            gold: ex.labeled_lf.clone(),
            predicted: top.map(|r| r.logical_form.clone()),
            score: top.map(|r| r.score),
            correct,
        });
    }
    metrics.accuracy = ratio(metrics.correct, metrics.n);
    metrics.coverage = ratio(metrics.parsed, metrics.n);
    metrics
}

#[cfg(test)]
mod tests;
