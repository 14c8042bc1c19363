use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::HarnessError;
use crate::grammar::{Syntax, SyntaxInventory};
use crate::learning::TrainParams;
use crate::model::FeatureConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trainer {
    Supervised,
    Validation,
}

impl Trainer {
    pub fn name(self) -> &'static str {
        match self {
            Trainer::Supervised => "supervised",
            Trainer::Validation => "validation",
        }
    }
}

/// Everything one `train` run needs. Paths are resolved against the
/// directory holding the config file.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub ontology: PathBuf,
    pub seed_lexicon: PathBuf,
    pub train: PathBuf,
    pub test: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub trainer: Trainer,
    pub atoms: Vec<String>,
    pub params: TrainParams,
}

const KEYS: &[&str] = &[
    "ontology",
    "seed_lexicon",
    "train",
    "test",
    "output_dir",
    "trainer",
    "atoms",
    "epochs",
    "beam",
    "margin",
    "k_best",
    "genlex_max_span",
    "genlex_max_entries",
    "split_max_new_arity",
    "split_max_abstracted_vars",
    "max_lexical_span",
    "root_syntaxes",
    "features",
    "seed_prior",
];

fn invalid(message: String) -> HarnessError {
    HarnessError::Config(message)
}

fn positive(key: &str, value: &str) -> Result<usize, HarnessError> {
    match value.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(invalid(format!("`{}` must be a positive integer, found `{}`", key, value))),
    }
}

fn non_negative(key: &str, value: &str) -> Result<usize, HarnessError> {
    value
        .parse::<usize>()
        .map_err(|_| invalid(format!("`{}` must be a non-negative integer, found `{}`", key, value)))
}

fn finite(key: &str, value: &str) -> Result<f64, HarnessError> {
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(invalid(format!("`{}` must be a finite number, found `{}`", key, value))),
    }
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        ExperimentConfig::parse(&text, base)
    }

    /// Reads `key = value` lines; `#` starts a comment line. Referenced input
    /// files must exist.
    pub fn parse(text: &str, base: &Path) -> Result<ExperimentConfig, HarnessError> {
        let mut values: BTreeMap<&str, &str> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("line {}: expected `key = value`", idx + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(invalid(format!("line {}: unknown key `{}`", idx + 1, key)));
            }
            if values.insert(key, value).is_some() {
                return Err(invalid(format!("line {}: duplicate key `{}`", idx + 1, key)));
            }
        }

        let path = |key: &str| -> Result<Option<PathBuf>, HarnessError> {
            Ok(values.get(key).map(|v| base.join(v)))
        };
        let existing = |key: &str| -> Result<PathBuf, HarnessError> {
            let p = path(key)?.ok_or_else(|| invalid(format!("missing required key `{}`", key)))?;
            if !p.is_file() {
                return Err(HarnessError::Missing(p));
            }
            Ok(p)
        };
        let ontology = existing("ontology")?;
        let seed_lexicon = existing("seed_lexicon")?;
        let train = existing("train")?;
        let test = match path("test")? {
            Some(p) if !p.is_file() => return Err(HarnessError::Missing(p)),
            other => other,
        };
        let output_dir = path("output_dir")?.ok_or_else(|| invalid("missing required key `output_dir`".into()))?;

        let trainer = match values.get("trainer").copied().unwrap_or("supervised") {
            "supervised" => Trainer::Supervised,
            "validation" => Trainer::Validation,
            other => return Err(invalid(format!("unknown trainer `{}`", other))),
        };
        let atoms = values.get("atoms").map_or_else(Vec::new, |v| list(v));
        let mut inventory = SyntaxInventory::default();
        for a in &atoms {
            if a.is_empty() || !a.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(invalid(format!("bad atom `{}`", a)));
            }
            inventory.declare(a);
        }

        let mut params = TrainParams::default();
        for (&key, &value) in &values {
            match key {
                "epochs" => params.epochs = positive(key, value)?,
                "beam" => {
                    params.beam = if value == "none" {
                        None
                    } else {
                        Some(positive(key, value)?)
                    }
                }
                "margin" => {
                    params.margin = finite(key, value)?;
                    if params.margin < 0.0 {
                        return Err(invalid("`margin` must be non-negative".into()));
                    }
                }
                "k_best" => params.k_best = positive(key, value)?,
                "genlex_max_span" => params.genlex.max_span = positive(key, value)?,
                "genlex_max_entries" => params.genlex.max_entries_per_example = positive(key, value)?,
                "split_max_new_arity" => params.split.max_new_arity = non_negative(key, value)?,
                "split_max_abstracted_vars" => params.split.max_abstracted_vars = non_negative(key, value)?,
                "max_lexical_span" => params.max_lexical_span = positive(key, value)?,
                "seed_prior" => params.seed_prior = finite(key, value)?,
                "features" => params.features = FeatureConfig::from_names(value).map_err(invalid)?,
                "root_syntaxes" => {
                    let roots = list(value)
                        .iter()
                        .map(|s| Syntax::parse(s, &inventory))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| invalid(format!("`root_syntaxes`: {}", e)))?;
                    if roots.is_empty() {
                        return Err(invalid("`root_syntaxes` must not be empty".into()));
                    }
                    params.root_syntaxes = roots;
                }
                _ => {}
            }
        }
        params.validate().map_err(|e| invalid(e.to_string()))?;

        Ok(ExperimentConfig {
            ontology,
            seed_lexicon,
            train,
            test,
            output_dir,
            trainer,
            atoms,
            params,
        })
    }

    pub fn inventory(&self) -> SyntaxInventory {
        let mut inventory = SyntaxInventory::default();
        for a in &self.atoms {
            inventory.declare(a);
        }
        inventory
    }

    /// Renders every setting, defaults included, in the config format.
    /// Paths are written as stored, so the echo loads back from any
    /// directory when they are absolute.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{} = {}", k, v);
        };
        kv("ontology", self.ontology.display().to_string());
        kv("seed_lexicon", self.seed_lexicon.display().to_string());
        kv("train", self.train.display().to_string());
        if let Some(t) = &self.test {
            kv("test", t.display().to_string());
        }
        kv("output_dir", self.output_dir.display().to_string());
        kv("trainer", self.trainer.name().to_string());
        if !self.atoms.is_empty() {
            kv("atoms", self.atoms.join(","));
        }
        kv("epochs", p.epochs.to_string());
        kv("beam", p.beam.map_or_else(|| "none".to_string(), |b| b.to_string()));
        kv("margin", p.margin.to_string());
        kv("k_best", p.k_best.to_string());
        kv("genlex_max_span", p.genlex.max_span.to_string());
        kv("genlex_max_entries", p.genlex.max_entries_per_example.to_string());
        kv("split_max_new_arity", p.split.max_new_arity.to_string());
        kv("split_max_abstracted_vars", p.split.max_abstracted_vars.to_string());
        kv("max_lexical_span", p.max_lexical_span.to_string());
        kv(
            "root_syntaxes",
            p.root_syntaxes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
        );
        kv("features", p.features.names().join(","));
        kv("seed_prior", p.seed_prior.to_string());
        out
    }
}
