use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::{Backpointer, Chart};
use crate::grammar::{Category, LexicalEntry, Rule};
use crate::model::FeatureVector;

/// A node of a derivation tree. Leaves are lexical entries.
#[derive(Clone, Debug)]
pub enum DerivationNode {
    Lexical {
        span: (usize, usize),
        entry: Arc<LexicalEntry>,
        features: Arc<FeatureVector>,
    },
    Binary {
        span: (usize, usize),
        rule: Rule,
        category: Category,
        features: Arc<FeatureVector>,
        left: Arc<DerivationNode>,
        right: Arc<DerivationNode>,
    },
}

impl DerivationNode {
    pub fn span(&self) -> (usize, usize) {
        match self {
            DerivationNode::Lexical { span, .. } | DerivationNode::Binary { span, .. } => *span,
        }
    }

    pub fn category(&self) -> &Category {
        match self {
            DerivationNode::Lexical { entry, .. } => entry.category(),
            DerivationNode::Binary { category, .. } => category,
        }
    }

    pub fn step_features(&self) -> &FeatureVector {
        match self {
            DerivationNode::Lexical { features, .. } | DerivationNode::Binary { features, .. } => {
                features
            }
        }
    }

    fn collect_features(&self, out: &mut FeatureVector) {
        out.add_scaled(self.step_features(), 1.0);
        if let DerivationNode::Binary { left, right, .. } = self {
            left.collect_features(out);
            right.collect_features(out);
        }
    }

    fn collect_leaves(&self, out: &mut Vec<Arc<LexicalEntry>>) {
        match self {
            DerivationNode::Lexical { entry, .. } => out.push(entry.clone()),
            DerivationNode::Binary { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let indent = "  ".repeat(depth);
        match self {
            DerivationNode::Lexical { span, entry, .. } => {
                writeln!(f, "{}[{}..{}] lex {}", indent, span.0, span.1, entry)
            }
            DerivationNode::Binary {
                span,
                rule,
                category,
                left,
                right,
                ..
            } => {
                writeln!(f, "{}[{}..{}] {} {}", indent, span.0, span.1, rule, category)?;
                left.write_tree(f, depth + 1)?;
                right.write_tree(f, depth + 1)
            }
        }
    }
}

/// A complete derivation tree with its summed step features and score.
#[derive(Clone, Debug)]
pub struct Derivation {
    root: Arc<DerivationNode>,
    features: FeatureVector,
    score: f64,
}

impl Derivation {
    pub(crate) fn new(root: Arc<DerivationNode>, score: f64) -> Derivation {
        let mut features = FeatureVector::new();
        root.collect_features(&mut features);
        Derivation {
            root,
            features,
            score,
        }
    }

    pub fn root(&self) -> &DerivationNode {
        &self.root
    }

    pub fn category(&self) -> &Category {
        self.root.category()
    }

    pub fn span(&self) -> (usize, usize) {
        self.root.span()
    }

    pub fn features(&self) -> &FeatureVector {
        &self.features
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    /// Lexical entries at the leaves, left to right.
    pub fn lexical_entries(&self) -> Vec<Arc<LexicalEntry>> {
        let mut out = Vec::new();
        self.root.collect_leaves(&mut out);
        out
    }

    /// Replays every rule bottom-up and checks it reproduces the stored
    /// category, and that child spans partition their parent's span.
    pub fn replay(&self) -> Result<(), String> {
        fn check(node: &DerivationNode) -> Result<(), String> {
            match node {
                DerivationNode::Lexical { span, entry, .. } => {
                    if span.1 - span.0 != entry.tokens().len() {
                        return Err(format!("leaf span {:?} does not match {}", span, entry));
                    }
                    Ok(())
                }
                DerivationNode::Binary {
                    span,
                    rule,
                    category,
                    left,
                    right,
                    ..
                } => {
                    check(left)?;
                    check(right)?;
                    let (ls, rs) = (left.span(), right.span());
                    if ls.0 != span.0 || ls.1 != rs.0 || rs.1 != span.1 {
                        return Err(format!("children {:?} {:?} do not partition {:?}", ls, rs, span));
                    }
                    match rule.apply(left.category(), right.category()) {
                        Some(c) if c == *category => Ok(()),
                        Some(c) => Err(format!("{} produced {} not {}", rule, c, category)),
                        None => Err(format!("{} does not apply at {:?}", rule, span)),
                    }
                }
            }
        }
        check(&self.root)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write_tree(f, 0)
    }
}

type Scored = (f64, Arc<DerivationNode>);

/// Memoized k-best expansion of chart items through their backpointers.
pub(crate) struct KBest<'c> {
    chart: &'c Chart,
    k: usize,
    memo: HashMap<(usize, usize, usize), Arc<Vec<Scored>>>,
}

impl<'c> KBest<'c> {
    pub(crate) fn new(chart: &'c Chart, k: usize) -> KBest<'c> {
        KBest {
            chart,
            k: k.max(1),
            memo: HashMap::new(),
        }
    }

    /// Up to k best derivations of item `idx` in cell `(start, end)`, best
    /// first; ties keep backpointer order.
    pub(crate) fn item(&mut self, start: usize, end: usize, idx: usize) -> Arc<Vec<Scored>> {
        if let Some(hit) = self.memo.get(&(start, end, idx)) {
            return hit.clone();
        }
        let chart = self.chart;
        let item = &chart.cell(start, end)[idx];
        let mut candidates: Vec<Scored> = Vec::new();
        for bp in &item.backpointers {
            match bp {
                Backpointer::Lexical {
                    entry,
                    features,
                    step_score,
                } => candidates.push((
                    *step_score,
                    Arc::new(DerivationNode::Lexical {
                        span: (start, end),
                        entry: entry.clone(),
                        features: features.clone(),
                    }),
                )),
                Backpointer::Binary {
                    rule,
                    split,
                    left,
                    right,
                    features,
                    step_score,
                } => {
                    let lefts = self.item(start, *split, *left);
                    let rights = self.item(*split, end, *right);
                    for (ls, ln) in lefts.iter() {
                        for (rs, rn) in rights.iter() {
                            candidates.push((
                                ls + rs + step_score,
                                Arc::new(DerivationNode::Binary {
                                    span: (start, end),
                                    rule: *rule,
                                    category: item.category.clone(),
                                    features: features.clone(),
                                    left: ln.clone(),
                                    right: rn.clone(),
                                }),
                            ));
                        }
                    }
                }
            }
        }
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
        candidates.truncate(self.k);
        let result = Arc::new(candidates);
        self.memo.insert((start, end, idx), result.clone());
        result
    }
}
