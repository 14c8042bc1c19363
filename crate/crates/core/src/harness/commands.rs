use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{
    load_dataset, load_lexicon, load_model, load_ontology, write, ExperimentConfig, HarnessError, Trainer, EXIT_OK,
};
use crate::chart::{complete_parses, parse_chart, tokenize, ParseOptions};
use crate::grammar::{Syntax, SyntaxInventory};
use crate::learning::{evaluate, train_supervised, train_validation_driven, Metrics};

fn finish(result: Result<(), HarnessError>, err: &mut dyn Write) -> i32 {
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            e.exit_code()
        }
    }
}

fn out_err(e: std::io::Error) -> HarnessError {
    HarnessError::Io {
        path: PathBuf::from("<stdout>"),
        message: e.to_string(),
    }
}

fn metrics_lines(prefix: &str, m: &Metrics, out: &mut String) {
    let _ = writeln!(out, "{}_accuracy={:.3}", prefix, m.accuracy);
    let _ = writeln!(out, "{}_coverage={:.3}", prefix, m.coverage);
    let _ = writeln!(out, "{}_n={}", prefix, m.n);
}

/// Runs the configured trainer and writes `model.txt`, `lexicon.txt`,
/// `train_report.log`, `metrics.txt`, `config.txt` and per-example outcome
/// files into the output directory.
pub fn cmd_train(config: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    finish(train(config, out), err)
}

fn train(path: &Path, out: &mut dyn Write) -> Result<(), HarnessError> {
    let config = ExperimentConfig::load(path)?;
    let mut ontology = load_ontology(&config.ontology)?;
    let seed = load_lexicon(&config.seed_lexicon, &mut ontology, config.inventory())?;
    let train_set = load_dataset(&config.train, &mut ontology)?;
    if train_set.is_empty() {
        return Err(HarnessError::load(&config.train, "dataset has no examples"));
    }
    let test_set = match &config.test {
        Some(p) => Some(load_dataset(p, &mut ontology)?),
        None => None,
    };

    let params = &config.params;
    let (model, lexicon, report) = match config.trainer {
        Trainer::Supervised => train_supervised(&train_set.supervised(), &seed, params)?,
        Trainer::Validation => train_validation_driven(&train_set.validation(), &seed, params)?,
    };

    let options = params.parse_options();
    let train_metrics = evaluate(&model, &lexicon, &train_set.supervised(), &options);
    let mut metrics = String::new();
    metrics_lines("train", &train_metrics, &mut metrics);
    let test_metrics = test_set.map(|t| evaluate(&model, &lexicon, &t.supervised(), &options));
    if let Some(m) = &test_metrics {
        metrics_lines("test", m, &mut metrics);
    }

    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    write(&dir.join("model.txt"), &model.to_text())?;
    write(&dir.join("lexicon.txt"), &lexicon.to_text())?;
    write(&dir.join("train_report.log"), &report.to_log())?;
    write(&dir.join("metrics.txt"), &metrics)?;
    write(&dir.join("config.txt"), &config.to_text())?;
    write(&dir.join("train_outcomes.txt"), &train_metrics.outcomes_text())?;
    if let Some(m) = &test_metrics {
        write(&dir.join("test_outcomes.txt"), &m.outcomes_text())?;
    }

    write!(out, "{}{}", report.to_log(), metrics).map_err(out_err)?;
    writeln!(out, "wrote {}", dir.display()).map_err(out_err)?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ParseArgs {
    pub model: PathBuf,
    pub lexicon: PathBuf,
    pub ontology: PathBuf,
    pub sentence: String,
    pub k: usize,
    pub beam: Option<usize>,
    /// Comma-separated root categories; `S` when absent.
    pub roots: Option<String>,
}

/// Prints up to `k` parses as `score<TAB>logical form`, best first, or
/// `NO PARSE`.
pub fn cmd_parse(args: &ParseArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    finish(parse(args, out), err)
}

fn parse_options(
    beam: Option<usize>,
    roots: Option<&str>,
    inventory: &SyntaxInventory,
) -> Result<ParseOptions, HarnessError> {
    let mut options = ParseOptions::default();
    if let Some(b) = beam {
        if b == 0 {
            return Err(HarnessError::Usage("beam must be positive".into()));
        }
        options.beam = Some(b);
    }
    if let Some(r) = roots {
        options.root_syntaxes = r
            .split(',')
            .map(|s| Syntax::parse(s.trim(), inventory))
            .collect::<Result<_, _>>()
            .map_err(|e| HarnessError::Usage(format!("bad root category: {}", e)))?;
    }
    Ok(options)
}

fn parse(args: &ParseArgs, out: &mut dyn Write) -> Result<(), HarnessError> {
    if args.k == 0 {
        return Err(HarnessError::Usage("k must be positive".into()));
    }
    let mut ontology = load_ontology(&args.ontology)?;
    let lexicon = load_lexicon(&args.lexicon, &mut ontology, SyntaxInventory::default())?;
    let model = load_model(&args.model)?;
    let options = parse_options(args.beam, args.roots.as_deref(), lexicon.inventory())?;
    let chart = parse_chart(&tokenize(&args.sentence), &lexicon, &model, &options);
    let results = complete_parses(&chart, &options.root_syntaxes);
    if results.is_empty() {
        writeln!(out, "NO PARSE").map_err(out_err)?;
    }
    for r in results.iter().take(args.k) {
        writeln!(out, "{:.6}\t{}", r.score, r.logical_form).map_err(out_err)?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct EvaluateArgs {
    pub model: PathBuf,
    pub lexicon: PathBuf,
    pub ontology: PathBuf,
    pub test: PathBuf,
    /// Where per-example outcomes go; `outcomes.txt` beside the model file
    /// when absent.
    pub outcomes: Option<PathBuf>,
    pub beam: Option<usize>,
    pub roots: Option<String>,
}

/// Prints `accuracy=… coverage=… n=…` and writes the outcomes file.
pub fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    finish(evaluate_cmd(args, out), err)
}

fn evaluate_cmd(args: &EvaluateArgs, out: &mut dyn Write) -> Result<(), HarnessError> {
    let mut ontology = load_ontology(&args.ontology)?;
    let lexicon = load_lexicon(&args.lexicon, &mut ontology, SyntaxInventory::default())?;
    let model = load_model(&args.model)?;
    let test = load_dataset(&args.test, &mut ontology)?;
    if test.is_empty() {
        return Err(HarnessError::Load {
            path: args.test.clone(),
            message: "dataset has no examples".into(),
        });
    }
    let options = parse_options(args.beam, args.roots.as_deref(), lexicon.inventory())?;
    let metrics = evaluate(&model, &lexicon, &test.supervised(), &options);
    let outcomes = args.outcomes.clone().unwrap_or_else(|| {
        args.model
            .parent()
            .unwrap_or(Path::new(""))
            .join("outcomes.txt")
    });
    write(&outcomes, &metrics.outcomes_text())?;
    writeln!(
        out,
        "accuracy={:.3} coverage={:.3} n={}",
        metrics.accuracy, metrics.coverage, metrics.n
    )
    .map_err(out_err)?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct LexiconArgs {
    pub lexicon: PathBuf,
    pub ontology: PathBuf,
    pub factored: bool,
}

/// Prints the entries sorted by tokens, or with `factored` the lexemes and
/// templates under `# lexemes` and `# templates` headers.
pub fn cmd_lexicon(args: &LexiconArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    finish(lexicon_cmd(args, out), err)
}

fn lexicon_cmd(args: &LexiconArgs, out: &mut dyn Write) -> Result<(), HarnessError> {
    let mut ontology = load_ontology(&args.ontology)?;
    let lexicon = load_lexicon(&args.lexicon, &mut ontology, SyntaxInventory::default())?;
    let mut text = String::new();
    if args.factored {
        let (lexemes, templates) = lexicon.factored();
        let _ = writeln!(text, "# lexemes");
        for lx in &lexemes {
            let _ = writeln!(text, "{}", lx);
        }
        let _ = writeln!(text, "# templates");
        for t in &templates {
            let _ = writeln!(text, "{}", t);
        }
    } else {
        text = lexicon.to_text();
    }
    out.write_all(text.as_bytes()).map_err(out_err)
}
