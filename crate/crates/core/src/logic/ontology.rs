use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{parse_type, LogicError, SemType};

/// Names of the reserved logical connectives.
pub const CONNECTIVES: [&str; 3] = ["and", "or", "not"];

pub fn is_connective(name: &str) -> bool {
    CONNECTIVES.contains(&name)
}

/// Declared primitive types and typed constants.
///
/// A permissive ontology accepts undeclared primitives and constants; the
/// mutable expression parser records them as it goes.
#[derive(Clone, Debug, PartialEq)]
pub struct Ontology {
    primitives: BTreeSet<String>,
    constants: BTreeMap<String, SemType>,
    permissive: bool,
}

impl Default for Ontology {
    fn default() -> Self {
        Ontology::new()
    }
}

impl Ontology {
    /// The built-in primitives `e`, `t`, `i` and the connectives.
    pub fn new() -> Ontology {
        let mut constants = BTreeMap::new();
        let t = SemType::t();
        constants.insert("and".to_string(), SemType::variadic(t.clone(), t.clone()));
        constants.insert("or".to_string(), SemType::variadic(t.clone(), t.clone()));
        constants.insert("not".to_string(), SemType::function(t.clone(), t));
        Ontology {
            primitives: ["e", "t", "i"].iter().map(|s| s.to_string()).collect(),
            constants,
            permissive: false,
        }
    }

    pub fn permissive() -> Ontology {
        Ontology {
            permissive: true,
            ..Ontology::new()
        }
    }

    pub fn is_permissive(&self) -> bool {
        self.permissive
    }

    pub fn set_permissive(&mut self, permissive: bool) {
        self.permissive = permissive;
    }

    pub fn has_primitive(&self, name: &str) -> bool {
        self.primitives.contains(name)
    }

    pub fn declare_primitive(&mut self, name: &str) {
        self.primitives.insert(name.to_string());
    }

    pub fn constant_type(&self, name: &str) -> Option<&SemType> {
        self.constants.get(name)
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &SemType)> {
        self.constants.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Declares a constant. Redeclaring with a different type, or with a type
    /// mentioning an undeclared primitive, is an error.
    pub fn declare_constant(&mut self, name: &str, ty: SemType) -> Result<(), LogicError> {
        let mut prims = Vec::new();
        ty.primitives(&mut prims);
        for p in prims {
            if !self.primitives.contains(p.as_ref()) {
                if self.permissive {
                    self.primitives.insert(p.to_string());
                } else {
                    return Err(LogicError::UndeclaredType {
                        name: p.to_string(),
                        offset: 0,
                    });
                }
            }
        }
        match self.constants.get(name) {
            Some(existing) if *existing != ty => Err(LogicError::TypeMismatch {
                offset: 0,
                message: format!(
                    "constant `{}` already declared as {}, not {}",
                    name, existing, ty
                ),
            }),
            Some(_) => Ok(()),
            None => {
                self.constants.insert(name.to_string(), ty);
                Ok(())
            }
        }
    }

    /// Reads the ontology file format: `name:type` per line, `:primitive name`
    /// for extra primitive types, `#` comment lines.
    pub fn parse(text: &str) -> Result<Ontology, OntologyError> {
        let mut ontology = Ontology::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| OntologyError {
                line: line_no,
                message,
            };
            if let Some(rest) = line.strip_prefix(":primitive") {
                let name = rest.trim();
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(err(format!("bad primitive declaration `{}`", line)));
                }
                ontology.declare_primitive(name);
                continue;
            }
            let (name, ty_text) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `name:type`, found `{}`", line)))?;
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(err(format!("bad constant name `{}`", name)));
            }
            let ty = parse_type(ty_text.trim(), &ontology).map_err(|e| err(e.to_string()))?;
            ontology
                .declare_constant(name, ty)
                .map_err(|e| err(e.to_string()))?;
        }
        Ok(ontology)
    }

    /// Renders the ontology in its file format. Built-in declarations are
    /// omitted.
    pub fn to_text(&self) -> String {
        let builtin = Ontology::new();
        let mut out = String::new();
        for p in &self.primitives {
            if !builtin.primitives.contains(p) {
                let _ = writeln!(out, ":primitive {}", p);
            }
        }
        for (name, ty) in &self.constants {
            if builtin.constants.get(name) != Some(ty) {
                let _ = writeln!(out, "{}:{}", name, ty);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("ontology line {line}: {message}")]
pub struct OntologyError {
    pub line: usize,
    pub message: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_present() {
        let o = Ontology::new();
        assert_eq!(o.constant_type("and").unwrap().to_string(), "<t*,t>");
        assert_eq!(o.constant_type("or").unwrap().to_string(), "<t*,t>");
        assert_eq!(o.constant_type("not").unwrap().to_string(), "<t,t>");
        assert!(o.has_primitive("i"));
    }

    #[test]
    fn parses_file_format() {
        let text = "# geo\n:primitive loc\ntexas:e\nborder:<e,<e,t>>\n\nplace:<loc,t>\n";
        let o = Ontology::parse(text).unwrap();
        assert_eq!(o.constant_type("border").unwrap().to_string(), "<e,<e,t>>");
        assert!(o.has_primitive("loc"));
        let again = Ontology::parse(&o.to_text()).unwrap();
        assert_eq!(again, o);
    }

    #[test]
    fn rejects_bad_lines() {
        let err = Ontology::parse("texas:e\nfoo\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = Ontology::parse("x:<e,zz>\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = Ontology::parse("x:e\nx:t\n").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
