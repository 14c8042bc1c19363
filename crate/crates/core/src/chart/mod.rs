//! Beam-pruned CKY parsing over a lexicon and the binary combinators.

mod derivation;

use std::collections::HashMap;
use std::sync::Arc;

pub use derivation::{Derivation, DerivationNode};
use derivation::KBest;

use crate::grammar::{Category, LexicalEntry, LexicalSource, Rule, Syntax};
use crate::logic::{simplify, Expr};
use crate::model::{FeatureVector, Model};

#[derive(Clone, Debug, PartialEq)]
pub struct ParseOptions {
    /// Items kept per cell; `None` keeps everything.
    pub beam: Option<usize>,
    pub max_lexical_span: usize,
    pub root_syntaxes: Vec<Syntax>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            beam: Some(50),
            max_lexical_span: 4,
            root_syntaxes: vec![Syntax::atom("S")],
        }
    }
}

#[derive(Clone, Debug)]
pub enum Backpointer {
    Lexical {
        entry: Arc<LexicalEntry>,
        features: Arc<FeatureVector>,
        step_score: f64,
    },
    Binary {
        rule: Rule,
        split: usize,
        /// Item index in cell `(start, split)`.
        left: usize,
        /// Item index in cell `(split, end)`.
        right: usize,
        features: Arc<FeatureVector>,
        step_score: f64,
    },
}

/// A packed chart item: one category per span, with every way of building
/// it. `score` is the Viterbi score over the backpointers.
#[derive(Clone, Debug)]
pub struct ChartItem {
    pub category: Category,
    pub score: f64,
    pub backpointers: Vec<Backpointer>,
}

#[derive(Clone, Debug)]
pub struct Chart {
    tokens: Vec<String>,
    cells: Vec<Vec<ChartItem>>,
    options: ParseOptions,
}

impl Chart {
    fn index(&self, start: usize, end: usize) -> usize {
        start * (self.tokens.len() + 1) + end
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn options(&self) -> &ParseOptions {
        &self.options
    }

    /// Items of span `start..end`, best first.
    pub fn cell(&self, start: usize, end: usize) -> &[ChartItem] {
        &self.cells[self.index(start, end)]
    }

    /// The full-sentence cell.
    pub fn root_cell(&self) -> &[ChartItem] {
        self.cell(0, self.tokens.len())
    }

    pub fn item_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }
}

/// Lowercases and splits on whitespace.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|t| t.to_lowercase())
        .collect()
}

#[derive(Default)]
struct CellBuilder {
    items: Vec<ChartItem>,
    index: HashMap<String, usize>,
}

impl CellBuilder {
    fn add(&mut self, category: Category, score: f64, bp: Backpointer) {
        match self.index.get(category.canonical()) {
            Some(&i) => {
                let item = &mut self.items[i];
                if score > item.score {
                    item.score = score;
                }
                item.backpointers.push(bp);
            }
            None => {
                self.index
                    .insert(category.canonical().to_string(), self.items.len());
                self.items.push(ChartItem {
                    category,
                    score,
                    backpointers: vec![bp],
                });
            }
        }
    }

    fn finish(self, beam: Option<usize>) -> Vec<ChartItem> {
        let mut items = self.items;
        items.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| a.category.canonical().cmp(b.category.canonical()))
        });
        if let Some(b) = beam {
            items.truncate(b);
        }
        items
    }
}

/// Builds the CKY chart for `tokens`. Lexical items are seeded for spans up
/// to `max_lexical_span`; each cell is closed under the four combinators over
/// all split points, then pruned to the beam by Viterbi score with ties
/// broken by canonical category text.
pub fn parse_chart(
    tokens: &[String],
    lexicon: &dyn LexicalSource,
    model: &Model,
    options: &ParseOptions,
) -> Chart {
    let n = tokens.len();
    let mut chart = Chart {
        tokens: tokens.to_vec(),
        cells: vec![Vec::new(); (n + 1) * (n + 1)],
        options: options.clone(),
    };
    if n == 0 {
        return chart;
    }
    let rule_steps: Vec<(Rule, Arc<FeatureVector>, f64)> = Rule::ALL
        .iter()
        .map(|&r| {
            let fv = model.rule_features(r);
            let s = model.score(&fv);
            (r, Arc::new(fv), s)
        })
        .collect();

    for len in 1..=n {
        for start in 0..=(n - len) {
            let end = start + len;
            let mut cell = CellBuilder::default();
            if len <= options.max_lexical_span {
                for entry in lexicon.lookup(&tokens[start..end]) {
                    let fv = model.lexical_features(&entry);
                    let s = model.score(&fv);
                    cell.add(
                        entry.category().clone(),
                        s,
                        Backpointer::Lexical {
                            entry,
                            features: Arc::new(fv),
                            step_score: s,
                        },
                    );
                }
            }
            for split in (start + 1)..end {
                let lefts = chart.cell(start, split);
                let rights = chart.cell(split, end);
                for (li, l) in lefts.iter().enumerate() {
                    for (ri, r) in rights.iter().enumerate() {
                        for (rule, fv, step) in &rule_steps {
                            if let Some(cat) = rule.apply(&l.category, &r.category) {
                                let score = l.score + r.score + step;
                                cell.add(
                                    cat,
                                    score,
                                    Backpointer::Binary {
                                        rule: *rule,
                                        split,
                                        left: li,
                                        right: ri,
                                        features: fv.clone(),
                                        step_score: *step,
                                    },
                                );
                            }
                        }
                    }
                }
            }
            let idx = chart.index(start, end);
            chart.cells[idx] = cell.finish(options.beam);
        }
    }
    chart
}

/// A complete parse: the root semantics (normalized) with its best
/// derivation.
#[derive(Clone, Debug)]
pub struct ParseResult {
    pub logical_form: Expr,
    pub derivation: Derivation,
    pub score: f64,
    canonical: String,
}

impl ParseResult {
    /// Canonical text of the logical form.
    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    pub fn features(&self) -> &FeatureVector {
        self.derivation.features()
    }
}

fn sort_results(results: &mut [ParseResult]) {
    results.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.canonical.cmp(&b.canonical))
    });
}

/// Root-cell items whose syntax is one of `root_syntaxes`, best first (score
/// descending, then logical-form text), one result per logical form.
pub fn complete_parses(chart: &Chart, root_syntaxes: &[Syntax]) -> Vec<ParseResult> {
    let n = chart.tokens.len();
    if n == 0 {
        return Vec::new();
    }
    let mut kbest = KBest::new(chart, 1);
    let mut results: Vec<ParseResult> = Vec::new();
    for (idx, item) in chart.root_cell().iter().enumerate() {
        if !root_syntaxes.contains(item.category.syntax()) {
            continue;
        }
        let best = kbest.item(0, n, idx);
        let (score, node) = &best[0];
        let logical_form = simplify(item.category.semantics());
        let canonical = logical_form.to_string();
        results.push(ParseResult {
            logical_form,
            derivation: Derivation::new(node.clone(), *score),
            score: *score,
            canonical,
        });
    }
    sort_results(&mut results);
    let mut seen = std::collections::HashSet::new();
    results.retain(|r| seen.insert(r.canonical.clone()));
    results
}

/// The k highest-scoring root derivations, exact within the pruned chart.
pub fn extract_derivations(chart: &Chart, k: usize) -> Vec<Derivation> {
    let n = chart.tokens.len();
    if n == 0 || k == 0 {
        return Vec::new();
    }
    let mut kbest = KBest::new(chart, k);
    let mut all: Vec<(f64, Arc<DerivationNode>)> = Vec::new();
    for (idx, item) in chart.root_cell().iter().enumerate() {
        if chart.options.root_syntaxes.contains(item.category.syntax()) {
            all.extend(kbest.item(0, n, idx).iter().cloned());
        }
    }
    all.sort_by(|a, b| b.0.total_cmp(&a.0));
    all.truncate(k);
    all.into_iter()
        .map(|(s, node)| Derivation::new(node, s))
        .collect()
}

/// The first result accepted by `validator`. Results are expected best
/// first; validator errors propagate.
pub fn max_scoring_valid<E, F>(
    results: &[ParseResult],
    mut validator: F,
) -> Result<Option<&ParseResult>, E>
where
    F: FnMut(&ParseResult) -> Result<bool, E>,
{
    for r in results {
        if validator(r)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}
