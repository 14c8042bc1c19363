//! Parenthesized prefix notation for logical expressions.
//!
//! ```text
//! (lambda $0:e (and:<t*,t> (city:<e,t> $0) (major:<e,t> $0)))
//! ```
//!
//! Constants are written `name:type` (the type may be omitted when the
//! ontology declares the constant), variables `$k:type` at the binder and
//! `$k` afterwards, template placeholders `#k:type`.

use std::fmt::Write as _;

use super::types::{apply_types, parse_type_at};
use super::{Constant, Expr, LogicError, Ontology, SemType, Variable};

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(text: &str) -> Vec<(usize, Token<'_>)> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((s, Token::Atom(&text[s..i])));
            }
            match c {
                '(' => tokens.push((i, Token::Open)),
                ')' => tokens.push((i, Token::Close)),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((s, Token::Atom(&text[s..])));
    }
    tokens
}

/// Parses an expression, checking constants against `ontology`. With a
/// permissive ontology, undeclared constants and primitives are recorded.
pub fn parse_expression(text: &str, ontology: &mut Ontology) -> Result<Expr, LogicError> {
    let tokens = tokenize(text);
    let mut parser = ExprParser {
        tokens,
        pos: 0,
        end: text.len(),
        ontology,
        scope: Vec::new(),
    };
    if parser.tokens.is_empty() {
        return Err(LogicError::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let (expr, _) = parser.parse()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.error("trailing input after expression"));
    }
    Ok(expr)
}

struct ExprParser<'a, 'o> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end: usize,
    ontology: &'o mut Ontology,
    scope: Vec<Variable>,
}

impl<'a> ExprParser<'a, '_> {
    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn error(&self, message: &str) -> LogicError {
        LogicError::Syntax {
            offset: self.offset(),
            message: message.to_string(),
        }
    }

    fn next(&mut self) -> Option<(usize, Token<'a>)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse(&mut self) -> Result<(Expr, SemType), LogicError> {
        let (offset, token) = self
            .next()
            .ok_or_else(|| self.error("unexpected end of input"))?;
        match token {
            Token::Close => Err(LogicError::Syntax {
                offset,
                message: "unexpected `)`".into(),
            }),
            Token::Atom(atom) => self.parse_atom(atom, offset),
            Token::Open => {
                if let Some((_, Token::Atom("lambda"))) = self.tokens.get(self.pos) {
                    self.pos += 1;
                    return self.parse_lambda();
                }
                let (pred, pred_ty) = self.parse()?;
                let mut args = Vec::new();
                let mut arg_tys = Vec::new();
                loop {
                    match self.tokens.get(self.pos) {
                        Some((_, Token::Close)) => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => {
                            let (a, t) = self.parse()?;
                            args.push(a);
                            arg_tys.push(t);
                        }
                        None => return Err(self.error("missing `)`")),
                    }
                }
                if args.is_empty() {
                    return Err(LogicError::Syntax {
                        offset,
                        message: "application without arguments".into(),
                    });
                }
                let ty = apply_types(&pred_ty, arg_tys.iter())
                    .map_err(|message| LogicError::TypeMismatch { offset, message })?;
                Ok((Expr::literal(pred, args), ty))
            }
        }
    }

    fn parse_lambda(&mut self) -> Result<(Expr, SemType), LogicError> {
        let (offset, token) = self
            .next()
            .ok_or_else(|| self.error("lambda without parameter"))?;
        let atom = match token {
            Token::Atom(a) if a.starts_with('$') => a,
            _ => {
                return Err(LogicError::Syntax {
                    offset,
                    message: "expected `$k:type` after lambda".into(),
                })
            }
        };
        let (id, ty) = self.parse_var_atom(atom, offset)?;
        let ty = ty.ok_or(LogicError::Syntax {
            offset,
            message: "lambda parameter needs a type".into(),
        })?;
        let param = Variable::new(id, ty);
        self.scope.push(param.clone());
        let body = self.parse();
        self.scope.pop();
        let (body, body_ty) = body?;
        match self.next() {
            Some((_, Token::Close)) => {}
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.error("expected `)` closing lambda"));
            }
        }
        let ty = SemType::function(param.ty.clone(), body_ty);
        Ok((Expr::lambda(param, body), ty))
    }

    fn parse_var_atom(
        &mut self,
        atom: &str,
        offset: usize,
    ) -> Result<(u32, Option<SemType>), LogicError> {
        let rest = &atom[1..];
        let (id_text, ty_text) = match rest.split_once(':') {
            Some((i, t)) => (i, Some(t)),
            None => (rest, None),
        };
        let id: u32 = id_text.parse().map_err(|_| LogicError::Syntax {
            offset,
            message: format!("bad variable `{}`", atom),
        })?;
        let ty = match ty_text {
            Some(t) => Some(self.parse_type(t, offset + 2 + id_text.len())?),
            None => None,
        };
        Ok((id, ty))
    }

    fn parse_type(&mut self, text: &str, offset: usize) -> Result<SemType, LogicError> {
        let ty = parse_type_at(text, offset, self.ontology)?;
        if self.ontology.is_permissive() {
            let mut prims = Vec::new();
            ty.primitives(&mut prims);
            for p in prims {
                self.ontology.declare_primitive(&p);
            }
        }
        Ok(ty)
    }

    fn parse_atom(&mut self, atom: &str, offset: usize) -> Result<(Expr, SemType), LogicError> {
        if atom == "lambda" {
            return Err(LogicError::Syntax {
                offset,
                message: "`lambda` outside of a binder".into(),
            });
        }
        if atom.starts_with('$') {
            let (id, ty) = self.parse_var_atom(atom, offset)?;
            let var = self
                .scope
                .iter()
                .rev()
                .find(|v| v.id == id)
                .cloned()
                .ok_or(LogicError::UnboundVariable { id, offset })?;
            if let Some(ty) = ty {
                if ty != var.ty {
                    return Err(LogicError::TypeMismatch {
                        offset,
                        message: format!("variable ${} is bound with type {}, not {}", id, var.ty, ty),
                    });
                }
            }
            let ty = var.ty.clone();
            return Ok((Expr::Variable(var), ty));
        }
        let (name, ty_text) = match atom.split_once(':') {
            Some((n, t)) => (n, Some(t)),
            None => (atom, None),
        };
        if name.is_empty() {
            return Err(LogicError::Syntax {
                offset,
                message: format!("bad constant `{}`", atom),
            });
        }
        let ty = match ty_text {
            Some(t) => Some(self.parse_type(t, offset + name.len() + 1)?),
            None => None,
        };
        let constant = if Constant::new(name, SemType::e()).placeholder_index().is_some() {
            let ty = ty.ok_or(LogicError::Syntax {
                offset,
                message: format!("placeholder `{}` needs a type", name),
            })?;
            Constant::new(name, ty)
        } else {
            match (self.ontology.constant_type(name).cloned(), ty) {
                (Some(declared), Some(ty)) if declared != ty => {
                    return Err(LogicError::TypeMismatch {
                        offset,
                        message: format!("constant `{}` is declared as {}, not {}", name, declared, ty),
                    })
                }
                (Some(declared), _) => Constant::new(name, declared),
                (None, Some(ty)) if self.ontology.is_permissive() => {
                    self.ontology.declare_constant(name, ty.clone())?;
                    Constant::new(name, ty)
                }
                (None, _) => {
                    return Err(LogicError::UnknownConstant {
                        name: name.to_string(),
                        offset,
                    })
                }
            }
        };
        let ty = constant.ty.clone();
        Ok((Expr::Constant(constant), ty))
    }
}

/// Canonical text: bound variables renumbered `$0, $1, ...` in order of
/// their binders.
pub fn print_expression(expr: &Expr) -> String {
    let mut printer = Printer::default();
    printer.print(expr);
    printer.out
}

/// Canonical text with placeholders printed without their types (`#0`).
pub fn print_with_bare_placeholders(expr: &Expr) -> String {
    let mut printer = Printer {
        bare_placeholders: true,
        ..Printer::default()
    };
    printer.print(expr);
    printer.out
}

#[derive(Default)]
struct Printer {
    out: String,
    next: u32,
    scope: Vec<(u32, u32)>,
    bare_placeholders: bool,
}

impl Printer {
    fn print(&mut self, expr: &Expr) {
        match expr {
            Expr::Constant(c) => {
                if self.bare_placeholders && c.placeholder_index().is_some() {
                    self.out.push_str(&c.name);
                } else {
                    let _ = write!(self.out, "{}", c);
                }
            }
            Expr::Variable(v) => match self.scope.iter().rev().find(|(orig, _)| *orig == v.id) {
                Some(&(_, n)) => {
                    let _ = write!(self.out, "${}", n);
                }
                None => {
                    // open terms only arise mid-construction; the `?` keeps
                    // them from colliding with canonical bound names
                    let _ = write!(self.out, "?{}:{}", v.id, v.ty);
                }
            },
            Expr::Lambda(l) => {
                let n = self.next;
                self.next += 1;
                let _ = write!(self.out, "(lambda ${}:{} ", n, l.param.ty);
                self.scope.push((l.param.id, n));
                self.print(&l.body);
                self.scope.pop();
                self.out.push(')');
            }
            Expr::Literal(lit) => {
                self.out.push('(');
                self.print(&lit.predicate);
                for a in &lit.args {
                    self.out.push(' ');
                    self.print(a);
                }
                self.out.push(')');
            }
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_expression(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Result<Expr, LogicError> {
        parse_expression(text, &mut Ontology::permissive())
    }

    #[test]
    fn reads_lambda_and_literal() {
        let e = p("(lambda $0:e (city:<e,t> $0))").unwrap();
        match &e {
            Expr::Lambda(l) => {
                assert_eq!(l.param.id, 0);
                match &l.body {
                    Expr::Literal(lit) => {
                        assert_eq!(lit.predicate.as_constant().unwrap().name.as_ref(), "city");
                        assert_eq!(lit.args, vec![Expr::Variable(l.param.clone())]);
                    }
                    other => panic!("{:?}", other),
                }
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn reads_variadic_literal() {
        let e = p("(and:<t*,t> (city:<e,t> austin:e) (major:<e,t> austin:e))").unwrap();
        match e {
            Expr::Literal(lit) => assert_eq!(lit.args.len(), 2),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn rejects_type_mismatch() {
        assert!(matches!(
            p("(city:<e,t> austin:t)"),
            Err(LogicError::TypeMismatch { offset: 0, .. })
        ));
        let mut strict = Ontology::new();
        strict.declare_constant("austin", SemType::e()).unwrap();
        assert!(matches!(
            parse_expression("austin:t", &mut strict),
            Err(LogicError::TypeMismatch { .. })
        ));
    }

    #[test]
    fn rejects_unbound_and_malformed() {
        assert!(matches!(
            p("(city:<e,t> $0)"),
            Err(LogicError::UnboundVariable { id: 0, offset: 12 })
        ));
        assert!(matches!(p("(city:<e,t> austin:e"), Err(LogicError::Syntax { .. })));
        assert!(matches!(p("(city:<e,t>)"), Err(LogicError::Syntax { .. })));
        assert!(matches!(p("austin:e)"), Err(LogicError::Syntax { offset: 8, .. })));
        assert!(matches!(p("(lambda $0 $0)"), Err(LogicError::Syntax { .. })));
        assert!(matches!(p(""), Err(LogicError::Syntax { .. })));
    }

    #[test]
    fn strict_ontology_resolves_untyped_constants() {
        let mut o = Ontology::parse("city:<e,t>\naustin:e\n").unwrap();
        let e = parse_expression("(city austin)", &mut o).unwrap();
        assert_eq!(print_expression(&e), "(city:<e,t> austin:e)");
        assert!(matches!(
            parse_expression("(city dallas:e)", &mut o),
            Err(LogicError::UnknownConstant { .. })
        ));
        let e = parse_expression("(and (city austin) (city austin))", &mut o).unwrap();
        assert_eq!(e.infer_type().unwrap(), SemType::t());
    }

    #[test]
    fn permissive_ontology_records_constants() {
        let mut o = Ontology::permissive();
        parse_expression("(river:<loc,t> x:loc)", &mut o).unwrap();
        assert!(o.has_primitive("loc"));
        assert_eq!(o.constant_type("x").unwrap().to_string(), "loc");
    }

    #[test]
    fn prints_canonically() {
        let e = Expr::lambda(
            Variable::new(7, SemType::e()),
            Expr::literal(
                Expr::constant("city", SemType::function(SemType::e(), SemType::t())),
                vec![Expr::var(7, SemType::e())],
            ),
        );
        assert_eq!(print_expression(&e), "(lambda $0:e (city:<e,t> $0))");
        assert_eq!(
            print_expression(&p("(lambda $3:e (major:<e,t> $3))").unwrap()),
            "(lambda $0:e (major:<e,t> $0))"
        );
    }

    #[test]
    fn shadowed_binders_print_distinct_names() {
        let e = p("(lambda $0:e (lambda $0:e (border:<e,<e,t>> $0 $0)))").unwrap();
        let text = print_expression(&e);
        assert_eq!(text, "(lambda $0:e (lambda $1:e (border:<e,<e,t>> $1 $1)))");
        assert!(p(&text).unwrap().alpha_equal(&e));
    }

    #[test]
    fn placeholders() {
        let e = p("(lambda $0:e (#0:<e,t> $0))").unwrap();
        assert_eq!(print_with_bare_placeholders(&e), "(lambda $0:e (#0 $0))");
        assert!(p("#1").is_err());
    }

    #[test]
    fn lambda_redex_as_predicate() {
        let e = p("((lambda $0:e (city:<e,t> $0)) austin:e)").unwrap();
        assert_eq!(print_expression(&e), "((lambda $0:e (city:<e,t> $0)) austin:e)");
    }
}
