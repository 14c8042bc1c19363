use std::collections::HashSet;

use crate::grammar::{factor_entry, LexicalEntry, LexicalTemplate, Lexicon, Origin};
use crate::logic::{Constant, Expr};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenlexConfig {
    pub max_span: usize,
    pub max_entries_per_example: usize,
}

impl Default for GenlexConfig {
    fn default() -> Self {
        GenlexConfig {
            max_span: 4,
            max_entries_per_example: 2000,
        }
    }
}

/// Factors every seed entry and keeps the distinct templates, in entry
/// order.
pub fn collect_templates(seed: &Lexicon) -> Vec<LexicalTemplate> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for e in seed.entries() {
        let (_, t) = factor_entry(e);
        if seen.insert(t.key().to_string()) {
            out.push(t);
        }
    }
    out
}

/// Distinct non-logical constants of `expr`, in first-occurrence order.
pub fn distinct_constants(expr: &Expr) -> Vec<Constant> {
    let mut out: Vec<Constant> = Vec::new();
    for c in expr.constants_of() {
        if c.placeholder_index().is_none() && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Every (span, template, constant selection) combination: each contiguous
/// token span up to `max_span` paired with each template filled by a
/// type-compatible ordered selection (with repetition) of the labeled
/// form's constants. Ordered by span start, span length, template text and
/// constant names, then capped.
pub fn genlex(
    tokens: &[String],
    labeled_lf: &Expr,
    templates: &[LexicalTemplate],
    config: &GenlexConfig,
) -> Vec<LexicalEntry> {
    let constants = distinct_constants(labeled_lf);
    // (template text, template key, constant names, category) per template fill
    let mut fills = Vec::new();
    for t in templates {
        let choices: Vec<Vec<&Constant>> = t
            .placeholder_types()
            .iter()
            .map(|ty| constants.iter().filter(|c| c.ty == *ty).collect())
            .collect();
        for selection in cartesian(&choices) {
            let owned: Vec<Constant> = selection.iter().map(|c| (*c).clone()).collect();
            if let Some(cat) = t.fill(&owned) {
                let names: Vec<&str> = owned.iter().map(|c| c.name.as_ref()).collect();
                fills.push((t.canonical().to_string(), t.key().to_string(), names.join(","), cat));
            }
        }
    }
    fills.sort_by(|a, b| (&a.0, &a.2, &a.1).cmp(&(&b.0, &b.2, &b.1)));

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let n = tokens.len();
    'outer: for start in 0..n {
        for len in 1..=config.max_span.min(n - start) {
            let span = &tokens[start..start + len];
            for (_, _, _, cat) in &fills {
                if out.len() >= config.max_entries_per_example {
                    break 'outer;
                }
                if let Ok(e) = LexicalEntry::new(span, cat.clone(), Origin::InducedGenlex) {
                    if seen.insert(e.canonical().to_string()) {
                        out.push(e);
                    }
                }
            }
        }
    }
    out
}

/// All ordered selections taking one element from each list.
fn cartesian<'a, T>(lists: &[Vec<&'a T>]) -> Vec<Vec<&'a T>> {
    let mut acc: Vec<Vec<&'a T>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(acc.len() * list.len());
        for prefix in &acc {
            for item in list {
                let mut v = prefix.clone();
                v.push(*item);
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Collects entries into a lexicon, for use as parse-time candidates.
pub fn candidate_lexicon<I: IntoIterator<Item = LexicalEntry>>(entries: I) -> Lexicon {
    let mut lex = Lexicon::new();
    for e in entries {
        lex.add(e);
    }
    lex
}
