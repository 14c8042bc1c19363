use std::fmt;
use std::sync::Arc;

use super::{LogicError, Ontology};

/// A semantic type: a primitive such as `e` or `t`, or a function type
/// `<domain,range>`. A function whose domain is marked variadic (`<t*,t>`)
/// consumes two or more arguments of the domain type at once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    Primitive(Arc<str>),
    Function {
        domain: Arc<SemType>,
        range: Arc<SemType>,
        variadic: bool,
    },
}

impl SemType {
    pub fn primitive(name: &str) -> SemType {
        SemType::Primitive(Arc::from(name))
    }

    pub fn function(domain: SemType, range: SemType) -> SemType {
        SemType::Function {
            domain: Arc::new(domain),
            range: Arc::new(range),
            variadic: false,
        }
    }

    pub fn variadic(domain: SemType, range: SemType) -> SemType {
        SemType::Function {
            domain: Arc::new(domain),
            range: Arc::new(range),
            variadic: true,
        }
    }

    pub fn e() -> SemType {
        SemType::primitive("e")
    }

    pub fn t() -> SemType {
        SemType::primitive("t")
    }

    pub fn is_function(&self) -> bool {
        matches!(self, SemType::Function { .. })
    }

    pub fn is_variadic(&self) -> bool {
        matches!(self, SemType::Function { variadic: true, .. })
    }

    /// Number of arguments a curried value of this type takes before
    /// reaching a non-function type.
    pub fn arity(&self) -> usize {
        match self {
            SemType::Primitive(_) => 0,
            SemType::Function { range, .. } => 1 + range.arity(),
        }
    }

    /// Visits every primitive name mentioned in the type.
    pub fn primitives(&self, out: &mut Vec<Arc<str>>) {
        match self {
            SemType::Primitive(name) => out.push(name.clone()),
            SemType::Function { domain, range, .. } => {
                domain.primitives(out);
                range.primitives(out);
            }
        }
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::Primitive(name) => f.write_str(name),
            SemType::Function {
                domain,
                range,
                variadic,
            } => {
                let star = if *variadic { "*" } else { "" };
                write!(f, "<{}{},{}>", domain, star, range)
            }
        }
    }
}

/// Result type of applying `predicate_type` to arguments of the given types,
/// or a message describing the mismatch.
pub(crate) fn apply_types<'a, I>(predicate_type: &SemType, args: I) -> Result<SemType, String>
where
    I: IntoIterator<Item = &'a SemType>,
    I::IntoIter: ExactSizeIterator,
{
    let args = args.into_iter();
    match predicate_type {
        SemType::Function {
            domain,
            range,
            variadic: true,
        } => {
            let n = args.len();
            if n < 2 {
                return Err(format!(
                    "variadic predicate of type {} needs at least 2 arguments, got {}",
                    predicate_type, n
                ));
            }
            for (i, arg) in args.enumerate() {
                if arg != domain.as_ref() {
                    return Err(format!(
                        "argument {} has type {}, expected {}",
                        i, arg, domain
                    ));
                }
            }
            Ok(range.as_ref().clone())
        }
        _ => {
            let mut current = predicate_type.clone();
            for (i, arg) in args.enumerate() {
                current = match current {
                    SemType::Function {
                        domain,
                        range,
                        variadic: false,
                    } => {
                        if arg != domain.as_ref() {
                            return Err(format!(
                                "argument {} has type {}, expected {}",
                                i, arg, domain
                            ));
                        }
                        range.as_ref().clone()
                    }
                    SemType::Function { .. } => {
                        return Err(format!("argument {} applied to a variadic result", i));
                    }
                    SemType::Primitive(_) => {
                        return Err(format!(
                            "argument {} applied to non-function type {}",
                            i, current
                        ));
                    }
                };
            }
            Ok(current)
        }
    }
}

/// Parses the angle-bracket type notation, e.g. `<<e,t>,<e,t>>` or `<t*,t>`.
pub fn parse_type(text: &str, ontology: &Ontology) -> Result<SemType, LogicError> {
    parse_type_at(text, 0, ontology)
}

/// Like [`parse_type`] but reports offsets relative to `base`.
pub(crate) fn parse_type_at(
    text: &str,
    base: usize,
    ontology: &Ontology,
) -> Result<SemType, LogicError> {
    if text.trim().is_empty() {
        return Err(LogicError::Syntax {
            offset: base,
            message: "empty type".into(),
        });
    }
    let mut parser = TypeParser {
        chars: text.char_indices().collect(),
        pos: 0,
        base,
        end: text.len(),
        ontology,
    };
    let (ty, variadic) = parser.parse()?;
    parser.skip_ws();
    if variadic {
        return Err(parser.error("variadic marker outside a function domain"));
    }
    if parser.pos < parser.chars.len() {
        return Err(parser.error("trailing characters after type"));
    }
    Ok(ty)
}

struct TypeParser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    base: usize,
    end: usize,
    ontology: &'a Ontology,
}

impl TypeParser<'_> {
    fn offset(&self) -> usize {
        self.base
            + self
                .chars
                .get(self.pos)
                .map(|&(i, _)| i)
                .unwrap_or(self.end)
    }

    fn error(&self, message: &str) -> LogicError {
        LogicError::Syntax {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<(), LogicError> {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", want)))
        }
    }

    /// Returns the type plus whether it carried a trailing `*`.
    fn parse(&mut self) -> Result<(SemType, bool), LogicError> {
        self.skip_ws();
        let ty = match self.peek() {
            Some('<') => {
                self.pos += 1;
                let (domain, variadic) = self.parse()?;
                self.expect(',')?;
                let (range, range_variadic) = self.parse()?;
                if range_variadic {
                    return Err(self.error("variadic marker on a function range"));
                }
                self.expect('>')?;
                SemType::Function {
                    domain: Arc::new(domain),
                    range: Arc::new(range),
                    variadic,
                }
            }
            Some(c) if is_type_name_char(c) => {
                let start = self.offset();
                let mut name = String::new();
                while let Some(c) = self.peek().filter(|&c| is_type_name_char(c)) {
                    name.push(c);
                    self.pos += 1;
                }
                if !self.ontology.has_primitive(&name) && !self.ontology.is_permissive() {
                    return Err(LogicError::UndeclaredType {
                        name,
                        offset: start,
                    });
                }
                SemType::Primitive(Arc::from(name.as_str()))
            }
            _ => return Err(self.error("expected a type")),
        };
        self.skip_ws();
        let variadic = if self.peek() == Some('*') {
            self.pos += 1;
            true
        } else {
            false
        };
        Ok((ty, variadic))
    }
}

fn is_type_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}
