use super::{apply_update, parse, EpochStats, LearnError, SupervisedExample, TrainParams, TrainReport};
use crate::chart::max_scoring_valid;
use crate::grammar::{Lexicon, Overlay};
use crate::induction::{candidate_lexicon, collect_templates, genlex};
use crate::model::Model;

/// Online perceptron training with template-based lexical generation.
///
/// Per example: parse with the lexicon plus GENLEX candidates and keep the
/// entries of the best parse matching the label; then re-parse with the
/// lexicon alone and, if the top parse is wrong but a correct one exists,
/// move the weights toward the correct parse's features.
pub fn train_supervised(
    data: &[SupervisedExample],
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

    for epoch in 1..=params.epochs {
        let mut stats = EpochStats {
            epoch,
            ..EpochStats::default()
        };
        for ex in data {
            let is_gold = |r: &crate::chart::ParseResult| -> Result<bool, LearnError> {
                Ok(r.logical_form.alpha_equal(&ex.labeled_lf))
            };

            let candidates =
                candidate_lexicon(genlex(&ex.tokens, &ex.labeled_lf, &templates, &params.genlex));
            let overlay = Overlay {
                base: &lexicon,
                extra: &candidates,
            };
            let generated = parse(&ex.tokens, &overlay, &model, &options);
            if let Some(good) = max_scoring_valid(&generated, is_gold)? {
                for entry in good.derivation.lexical_entries() {
                    lexicon.add(entry.as_ref().clone());
                }
            }

            let results = parse(&ex.tokens, &lexicon, &model, &options);
            let Some(best) = results.first() else {
                stats.unreachable += 1;
                continue;
            };
            stats.parsed += 1;
            if is_gold(best)? {
                stats.correct += 1;
                continue;
            }
            match max_scoring_valid(&results, is_gold)? {
                Some(good) => {
                    let direction = good.features().minus(best.features());
                    if !direction.is_empty() {
                        apply_update(&mut model, &direction, params.learning_rate);
                        stats.updates += 1;
                    }
                }
                None => stats.unreachable += 1,
            }
        }
        stats.lexicon = lexicon.len();
        report.epochs.push(stats);
    }

    for ex in data {
        let results = parse(&ex.tokens, &lexicon, &model, &options);
        if let Some(top) = results.first() {
            report.final_parsed += 1;
            report.final_correct += usize::from(top.logical_form.alpha_equal(&ex.labeled_lf));
        }
    }
    Ok((model, lexicon, report))
}
