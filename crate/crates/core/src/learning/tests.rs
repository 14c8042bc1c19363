use super::*;
use crate::chart::tokenize;
use crate::logic::{parse_expression, Ontology};

const SEED: &str = "texas :- NP : texas:e
oklahoma :- NP : oklahoma:e
touches :- (S\\NP)/NP : (lambda $0:e (lambda $1:e (touch:<e,<e,t>> $1 $0)))
";

fn ontology() -> Ontology {
    let mut o = Ontology::new();
    for line in [
        "texas:e",
        "oklahoma:e",
        "touch:<e,<e,t>>",
        "border:<e,<e,t>>",
    ] {
        let (name, ty) = line.split_once(':').unwrap();
        let ty = crate::logic::parse_type(ty, &o).unwrap();
        o.declare_constant(name, ty).unwrap();
    }
    o
}

fn seed(text: &str) -> Lexicon {
    Lexicon::parse(text, &mut ontology()).unwrap()
}

fn example(sentence: &str, lf: &str) -> SupervisedExample {
    SupervisedExample::new(tokenize(sentence), parse_expression(lf, &mut ontology()).unwrap())
}

fn toy() -> Vec<SupervisedExample> {
    vec![
        example("texas borders oklahoma", "(border:<e,<e,t>> texas:e oklahoma:e)"),
        example("oklahoma borders texas", "(border:<e,<e,t>> oklahoma:e texas:e)"),
    ]
}

fn params(epochs: usize) -> TrainParams {
    TrainParams {
        epochs,
        ..TrainParams::default()
    }
}

#[test]
fn separable_example_needs_no_updates() {
    let data = vec![example("texas touches oklahoma", "(touch:<e,<e,t>> texas:e oklahoma:e)")];
    let (_, lexicon, report) = train_supervised(&data, &seed(SEED), &params(1)).unwrap();
    assert_eq!(report.total_updates(), 0);
    assert_eq!(report.final_accuracy(), 1.0);
    assert_eq!(lexicon.len(), 3);
}

#[test]
fn learns_unseen_verb() {
    let (model, lexicon, report) = train_supervised(&toy(), &seed(SEED), &params(5)).unwrap();
    assert_eq!(report.final_correct, 2, "{}", report.to_log());
    let metrics = evaluate(&model, &lexicon, &toy(), &params(5).parse_options());
    assert_eq!(metrics.accuracy, 1.0);
    let gold = crate::grammar::LexicalEntry::parse(
        "borders :- (S\\NP)/NP : (lambda $0:e (lambda $1:e (border:<e,<e,t>> $1 $0)))",
        &mut ontology(),
        &crate::grammar::SyntaxInventory::default(),
        crate::grammar::Origin::InducedGenlex,
    )
    .unwrap();
    assert!(lexicon.contains(&gold));
}

#[test]
fn nothing_to_learn_from() {
    let data = toy();
    let (_, lexicon, report) = train_supervised(&data, &Lexicon::new(), &params(3)).unwrap();
    assert!(lexicon.is_empty());
    assert_eq!(report.total_updates(), 0);
    assert!(report.epochs.iter().all(|e| e.parsed == 0));
    assert_eq!(report.total_unreachable(), 3 * data.len());
}

#[test]
fn lexicon_grows_monotonically() {
    let (_, _, report) = train_supervised(&toy(), &seed(SEED), &params(4)).unwrap();
    let sizes: Vec<usize> = report.epochs.iter().map(|e| e.lexicon).collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{:?}", sizes);
    assert!(sizes[0] >= 3);
}

#[test]
fn rejects_bad_input() {
    assert_eq!(train_supervised(&[], &seed(SEED), &params(1)).unwrap_err(), LearnError::EmptyData);
    assert!(matches!(
        train_supervised(&toy(), &seed(SEED), &params(0)),
        Err(LearnError::InvalidParams(_))
    ));
    let negative = TrainParams {
        margin: -1.0,
        ..TrainParams::default()
    };
    assert!(train_validation_driven(&[ValidationExample::from(&toy()[0])], &seed(SEED), &negative).is_err());
}

#[test]
fn training_is_deterministic() {
    let a = train_supervised(&toy(), &seed(SEED), &params(3)).unwrap();
    let b = train_supervised(&toy(), &seed(SEED), &params(3)).unwrap();
    assert_eq!(a.0.to_text(), b.0.to_text());
    assert_eq!(a.1.to_text(), b.1.to_text());
    assert_eq!(a.2, b.2);
}

#[test]
fn weak_with_label_matches_supervised() {
    let data = toy();
    let weak: Vec<ValidationExample> = data.iter().map(ValidationExample::from).collect();
    let (sm, sl, _) = train_supervised(&data, &seed(SEED), &params(5)).unwrap();
    let (wm, wl, report) = train_validation_driven(&weak, &seed(SEED), &params(5)).unwrap();
    let options = params(5).parse_options();
    let s = evaluate(&sm, &sl, &data, &options);
    let w = evaluate(&wm, &wl, &data, &options);
    assert_eq!(s.correct, w.correct);
    assert_eq!(report.final_correct, w.correct);
}

#[test]
fn always_true_never_updates() {
    let always: Arc<dyn Validator> = Arc::new(FnValidator(|_: &ParseResult| Ok(true)));
    let data: Vec<ValidationExample> = toy()
        .iter()
        .map(|e| ValidationExample::new(e.tokens.clone(), always.clone()))
        .collect();
    let (_, _, report) = train_validation_driven(&data, &seed(SEED), &params(3)).unwrap();
    assert_eq!(report.total_updates(), 0);
}

#[test]
fn always_false_learns_nothing() {
    let never: Arc<dyn Validator> = Arc::new(FnValidator(|_: &ParseResult| Ok(false)));
    let data: Vec<ValidationExample> = toy()
        .iter()
        .map(|e| ValidationExample {
            tokens: e.tokens.clone(),
            validator: never.clone(),
            candidate_lfs: vec![e.labeled_lf.clone()],
        })
        .collect();
    let s = seed(SEED);
    let (model, lexicon, report) = train_validation_driven(&data, &s, &params(3)).unwrap();
    assert_eq!(report.total_updates(), 0);
    assert_eq!(lexicon.len(), s.len());
    assert_eq!(model, params(3).initial_model(&s));
}

#[test]
fn validator_error_names_example() {
    let failing: Arc<dyn Validator> = Arc::new(FnValidator(|_: &ParseResult| Err("boom".to_string())));
    let mut data: Vec<ValidationExample> = toy().iter().map(ValidationExample::from).collect();
    data.push(ValidationExample::new(tokenize("texas touches oklahoma"), failing));
    let err = train_validation_driven(&data, &seed(SEED), &params(1)).unwrap_err();
    assert_eq!(
        err,
        LearnError::Validator {
            index: 2,
            message: "boom".to_string()
        }
    );
}

#[test]
fn evaluate_edge_cases() {
    let model = Model::new(crate::model::FeatureConfig::default());
    let m = evaluate(&model, &Lexicon::new(), &toy(), &ParseOptions::default());
    assert_eq!((m.accuracy, m.coverage, m.n), (0.0, 0.0, 2));
    assert_eq!(m.outcomes_text().lines().count(), 2);
    assert!(m.outcomes_text().contains("noparse"));

    let m = evaluate(&model, &seed(SEED), &toy(), &ParseOptions::default());
    assert!(m.accuracy <= m.coverage);
    let empty = evaluate(&model, &seed(SEED), &[], &ParseOptions::default());
    assert_eq!((empty.accuracy, empty.coverage), (0.0, 0.0));
}

#[test]
fn report_log_format() {
    let (_, _, report) = train_supervised(&toy(), &seed(SEED), &params(2)).unwrap();
    let log = report.to_log();
    let first = log.lines().next().unwrap();
    assert!(first.starts_with("epoch 1: parsed="), "{}", first);
    assert!(first.contains(" correct=") && first.contains(" updates=") && first.contains(" lexicon="));
    assert_eq!(log.lines().filter(|l| l.starts_with("epoch ")).count(), 2);
}
