//! Batch front end: loads ontologies, lexicons, models and datasets, runs
//! the trainers, and writes artifacts. Commands report through the given
//! writers and return a process exit code: 0 on success, 1 on input or IO
//! errors, 2 when training itself fails.

mod commands;
mod config;
mod dataset;

use std::path::{Path, PathBuf};

pub use commands::{cmd_evaluate, cmd_lexicon, cmd_parse, cmd_train, EvaluateArgs, LexiconArgs, ParseArgs};
pub use config::{ExperimentConfig, Trainer};
pub use dataset::{Dataset, DatasetItem, Supervision};

use crate::grammar::{Lexicon, Origin, SyntaxInventory};
use crate::learning::LearnError;
use crate::logic::Ontology;
use crate::model::{FeatureConfig, Model};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_TRAINING: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("{}: file not found", .0.display())]
    Missing(PathBuf),
    #[error("config: {0}")]
    Config(String),
    #[error("line {line}: {message}")]
    Dataset { line: usize, message: String },
    #[error("{}: {message}", path.display())]
    Load { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("training failed: {0}")]
    Training(#[from] LearnError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> HarnessError {
        if e.kind() == std::io::ErrorKind::NotFound {
            HarnessError::Missing(path.to_path_buf())
        } else {
            HarnessError::Io {
                path: path.to_path_buf(),
                message: e.to_string(),
            }
        }
    }

    fn load(path: &Path, message: impl ToString) -> HarnessError {
        HarnessError::Load {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Training(_) => EXIT_TRAINING,
            _ => EXIT_INPUT,
        }
    }
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn write(path: &Path, contents: &str) -> Result<(), HarnessError> {
    std::fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

pub fn load_ontology(path: &Path) -> Result<Ontology, HarnessError> {
    Ontology::parse(&read(path)?).map_err(|e| HarnessError::load(path, e))
}

pub fn load_lexicon(
    path: &Path,
    ontology: &mut Ontology,
    inventory: SyntaxInventory,
) -> Result<Lexicon, HarnessError> {
    Lexicon::parse_with(&read(path)?, ontology, inventory, Origin::Seed).map_err(|e| HarnessError::load(path, e))
}

/// Weights for families missing from the file are zero, so any feature
/// configuration scores a saved model identically.
pub fn load_model(path: &Path) -> Result<Model, HarnessError> {
    Model::parse(&read(path)?, FeatureConfig::default()).map_err(|e| HarnessError::load(path, e))
}

pub fn load_dataset(path: &Path, ontology: &mut Ontology) -> Result<Dataset, HarnessError> {
    Dataset::parse(&read(path)?, ontology).map_err(|e| HarnessError::load(path, e))
}
