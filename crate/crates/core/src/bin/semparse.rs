use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use semparse::harness::{
    cmd_evaluate, cmd_lexicon, cmd_parse, cmd_train, EvaluateArgs, LexiconArgs, ParseArgs, EXIT_INPUT,
};

/// CCG semantic parser: train, parse, evaluate and inspect lexicons.
#[derive(Parser)]
#[command(name = "semparse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train from an experiment config and write artifacts.
    Train { config: PathBuf },
    /// Parse one sentence with a trained model.
    Parse {
        model: PathBuf,
        lexicon: PathBuf,
        ontology: PathBuf,
        sentence: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        beam: Option<usize>,
        /// Comma-separated root categories (default S).
        #[arg(long)]
        root: Option<String>,
    },
    /// Exact-match evaluation on a dataset.
    Evaluate {
        model: PathBuf,
        lexicon: PathBuf,
        ontology: PathBuf,
        testset: PathBuf,
        /// Per-example outcomes file (default: outcomes.txt beside the model).
        #[arg(long)]
        outcomes: Option<PathBuf>,
        #[arg(long)]
        beam: Option<usize>,
        #[arg(long)]
        root: Option<String>,
    },
    /// Print a lexicon, optionally as lexemes and templates.
    Lexicon {
        lexicon: PathBuf,
        ontology: PathBuf,
        #[arg(long)]
        factored: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let code = match cli.command {
        Command::Train { config } => cmd_train(&config, &mut out, &mut err),
        Command::Parse {
            model,
            lexicon,
            ontology,
            sentence,
            k,
            beam,
            root,
        } => cmd_parse(
            &ParseArgs {
                model,
                lexicon,
                ontology,
                sentence,
                k,
                beam,
                roots: root,
            },
            &mut out,
            &mut err,
        ),
        Command::Evaluate {
            model,
            lexicon,
            ontology,
            testset,
            outcomes,
            beam,
            root,
        } => cmd_evaluate(
            &EvaluateArgs {
                model,
                lexicon,
                ontology,
                test: testset,
                outcomes,
                beam,
                roots: root,
            },
            &mut out,
            &mut err,
        ),
        Command::Lexicon {
            lexicon,
            ontology,
            factored,
        } => cmd_lexicon(
            &LexiconArgs {
                lexicon,
                ontology,
                factored,
            },
            &mut out,
            &mut err,
        ),
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
