use std::collections::HashSet;

use super::{apply_update, parse, EpochStats, LearnError, TrainParams, TrainReport, ValidationExample};
use crate::chart::ParseResult;
use crate::grammar::{LexicalEntry, Lexicon, Overlay};
use crate::induction::{candidate_lexicon, collect_templates, enumerate_splits, genlex};
use crate::model::{FeatureVector, Model};

/// Splits results into (valid, invalid), both keeping best-first order.
fn partition<'r>(
    results: &'r [ParseResult],
    ex: &ValidationExample,
    index: usize,
) -> Result<(Vec<&'r ParseResult>, Vec<&'r ParseResult>), LearnError> {
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for r in results {
        let ok = ex
            .validator
            .validate(r)
            .map_err(|message| LearnError::Validator { index, message })?;
        if ok {
            good.push(r);
        } else {
            bad.push(r);
        }
    }
    Ok((good, bad))
}

fn mean_features(parses: &[&ParseResult]) -> FeatureVector {
    let mut sum = FeatureVector::new();
    for p in parses {
        sum.add_scaled(p.features(), 1.0);
    }
    sum.scaled(1.0 / parses.len() as f64)
}

/// Training from a validation signal instead of labeled logical forms.
///
/// Per example: candidates are the splits of every entry used by the
/// current top-k valid parses, plus GENLEX over the example's candidate
/// logical forms; entries of the top-k valid parses with those candidates
/// join the lexicon. Then, re-parsing with the lexicon, every invalid parse
/// within margin of the best valid one is pushed below the mean of the
/// top-k valid parses.
pub fn train_validation_driven(
    data: &[ValidationExample],
    seed: &Lexicon,
    params: &TrainParams,
) -> Result<(Model, Lexicon, TrainReport), LearnError> {
    if data.is_empty() {
        return Err(LearnError::EmptyData);
    }
    params.validate()?;
    let options = params.parse_options();
    let templates = collect_templates(seed);
    let mut model = params.initial_model(seed);
    let mut lexicon = seed.clone();
    let mut report = TrainReport {
        n: data.len(),
        ..TrainReport::default()
    };
    let k = params.k_best;

    for epoch in 1..=params.epochs {
        let mut stats = EpochStats {
            epoch,
            ..EpochStats::default()
        };
        for (index, ex) in data.iter().enumerate() {
            let current = parse(&ex.tokens, &lexicon, &model, &options);
            let (good, _) = partition(&current, ex, index)?;
            let mut generated: Vec<LexicalEntry> = Vec::new();
            let mut split_seen = HashSet::new();
            for p in good.iter().take(k) {
                for entry in p.derivation.lexical_entries() {
                    if !split_seen.insert(entry.canonical().to_string()) {
                        continue;
                    }
                    for (l, r) in enumerate_splits(&entry, &params.split) {
                        generated.push(l);
                        generated.push(r);
                    }
                }
            }
            for lf in &ex.candidate_lfs {
                generated.extend(genlex(&ex.tokens, lf, &templates, &params.genlex));
            }
            let candidates = candidate_lexicon(generated);
            let overlay = Overlay {
                base: &lexicon,
                extra: &candidates,
            };
            let widened = parse(&ex.tokens, &overlay, &model, &options);
            let (good, _) = partition(&widened, ex, index)?;
            for p in good.iter().take(k) {
                for entry in p.derivation.lexical_entries() {
                    lexicon.add(entry.as_ref().clone());
                }
            }

            let results = parse(&ex.tokens, &lexicon, &model, &options);
            let (good, bad) = partition(&results, ex, index)?;
            if !results.is_empty() {
                stats.parsed += 1;
            }
            let Some(best_good) = good.first() else {
                stats.unreachable += 1;
                continue;
            };
            if std::ptr::eq(*best_good, &results[0]) {
                stats.correct += 1;
            }
            let violating: Vec<&ParseResult> = bad
                .iter()
                .copied()
                .filter(|b| {
                    let distance = best_good.features().minus(b.features()).l1_norm();
                    b.score + params.margin * distance >= best_good.score
                })
                .collect();
            if violating.is_empty() {
                continue;
            }
            let top_good = &good[..good.len().min(k)];
            let direction = mean_features(top_good).minus(&mean_features(&violating));
            if !direction.is_empty() {
                apply_update(&mut model, &direction, params.learning_rate);
                stats.updates += 1;
            }
        }
        stats.lexicon = lexicon.len();
        report.epochs.push(stats);
    }

    for (index, ex) in data.iter().enumerate() {
        let results = parse(&ex.tokens, &lexicon, &model, &options);
        if let Some(top) = results.first() {
            report.final_parsed += 1;
            let ok = ex
                .validator
                .validate(top)
                .map_err(|message| LearnError::Validator { index, message })?;
            report.final_correct += usize::from(ok);
        }
    }
    Ok((model, lexicon, report))
}
