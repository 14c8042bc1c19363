use std::fmt::Write as _;

use super::HarnessError;
use crate::chart::tokenize;
use crate::learning::{SupervisedExample, ValidationExample};
use crate::logic::{parse_expression, Ontology};

const VALIDATOR_PREFIX: &str = "VALIDATOR:";

/// How an example is judged.
#[derive(Clone, Debug)]
pub enum Supervision {
    /// A plain logical-form line.
    Label,
    /// A `VALIDATOR:lf-equal(...)` line.
    LfEqualValidator,
}

#[derive(Clone, Debug)]
pub struct DatasetItem {
    pub example: SupervisedExample,
    pub supervision: Supervision,
}

/// Sentence/meaning pairs separated by blank lines. The meaning line is
/// either a logical form or `VALIDATOR:lf-equal(<expression>)`. Lines
/// starting with `#` are comments.
#[derive(Clone, Debug, Default)]
pub struct Dataset {
    pub items: Vec<DatasetItem>,
}

impl Dataset {
    pub fn parse(text: &str, ontology: &mut Ontology) -> Result<Dataset, HarnessError> {
        let mut items = Vec::new();
        let mut block: Vec<(usize, &str)> = Vec::new();
        let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        for (no, line) in lines.chain(std::iter::once((0, ""))) {
            if line.starts_with('#') {
                continue;
            }
            if !line.is_empty() {
                block.push((no, line));
                continue;
            }
            if block.is_empty() {
                continue;
            }
            let first = block[0].0;
            if block.len() != 2 {
                return Err(HarnessError::Dataset {
                    line: first,
                    message: format!("expected a sentence line and a meaning line, found {} lines", block.len()),
                });
            }
            let (sentence, (lf_line, meaning)) = (block[0].1, block[1]);
            let tokens = tokenize(sentence);
            let (text, supervision) = match meaning.strip_prefix(VALIDATOR_PREFIX) {
                Some(spec) => (parse_validator(spec, lf_line)?, Supervision::LfEqualValidator),
                None => (meaning, Supervision::Label),
            };
            let lf = parse_expression(text, ontology).map_err(|e| HarnessError::Dataset {
                line: lf_line,
                message: e.to_string(),
            })?;
            if !lf.is_closed() || !lf.is_well_typed() {
                return Err(HarnessError::Dataset {
                    line: lf_line,
                    message: "logical form must be closed and well-typed".to_string(),
                });
            }
            items.push(DatasetItem {
                example: SupervisedExample::new(tokens, lf),
                supervision,
            });
            block.clear();
        }
        Ok(Dataset { items })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn supervised(&self) -> Vec<SupervisedExample> {
        self.items.iter().map(|i| i.example.clone()).collect()
    }

    pub fn validation(&self) -> Vec<ValidationExample> {
        self.items.iter().map(|i| ValidationExample::from(&i.example)).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "{}", item.example.tokens.join(" "));
            match item.supervision {
                Supervision::Label => {
                    let _ = writeln!(out, "{}", item.example.labeled_lf);
                }
                Supervision::LfEqualValidator => {
                    let _ = writeln!(out, "{}lf-equal({})", VALIDATOR_PREFIX, item.example.labeled_lf);
                }
            }
        }
        out
    }
}

fn parse_validator(spec: &str, line: usize) -> Result<&str, HarnessError> {
    let spec = spec.trim();
    let err = |message: String| HarnessError::Dataset { line, message };
    let (name, rest) = spec
        .split_once('(')
        .ok_or_else(|| err(format!("expected `name(args)`, found `{}`", spec)))?;
    let args = rest
        .strip_suffix(')')
        .ok_or_else(|| err("validator arguments must end with `)`".to_string()))?;
    match name.trim() {
        "lf-equal" => Ok(args.trim()),
        other => Err(err(format!("unknown validator `{}`", other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "# two examples
Texas borders Oklahoma
(border:<e,<e,t>> texas:e oklahoma:e)

austin is in texas
VALIDATOR:lf-equal((loc:<e,<e,t>> austin:e texas:e))
";

    #[test]
    fn reads_labels_and_validators() {
        let d = Dataset::parse(TEXT, &mut Ontology::permissive()).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.items[0].example.tokens, ["texas", "borders", "oklahoma"]);
        assert!(matches!(d.items[0].supervision, Supervision::Label));
        assert!(matches!(d.items[1].supervision, Supervision::LfEqualValidator));
        assert_eq!(d.items[1].example.labeled_lf.to_string(), "(loc:<e,<e,t>> austin:e texas:e)");
        assert_eq!(d.validation().len(), 2);
    }

    #[test]
    fn text_round_trips() {
        let d = Dataset::parse(TEXT, &mut Ontology::permissive()).unwrap();
        let again = Dataset::parse(&d.to_text(), &mut Ontology::permissive()).unwrap();
        assert_eq!(again.to_text(), d.to_text());
    }

    #[test]
    fn malformed_blocks() {
        let bad = |text: &str| Dataset::parse(text, &mut Ontology::permissive()).unwrap_err().to_string();
        assert!(bad("just a sentence\n").contains("line 1"));
        assert!(bad("a b\n(p:<e,t> a:e)\nextra\n").contains("3 lines"));
        assert!(bad("a b\nVALIDATOR:always()\n").contains("unknown validator"));
        assert!(bad("a b\nVALIDATOR:lf-equal(p:<e,t>\n").contains("`)`"));
        assert!(bad("a b\n(lambda $0:e $1)\n").contains("line 2"));
        let strict = Dataset::parse("a\n(p:<e,t> a:e)\n", &mut Ontology::new()).unwrap_err();
        assert!(strict.to_string().contains("line 2"), "{}", strict);
    }

    #[test]
    fn empty_input_is_empty() {
        assert!(Dataset::parse("\n# only a comment\n\n", &mut Ontology::permissive()).unwrap().is_empty());
    }
}
