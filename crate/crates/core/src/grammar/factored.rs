//! Factored lexicons: an entry splits into a lexeme (tokens plus content
//! constants) and a template (the category with those constants abstracted
//! into typed placeholders `#0..#k`).

use std::fmt;

use super::{Category, LexicalEntry, Origin, Syntax};
use crate::logic::{print_with_bare_placeholders, Constant, Expr, SemType};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lexeme {
    pub tokens: Vec<String>,
    pub constants: Vec<Constant>,
}

impl Lexeme {
    pub fn arity(&self) -> usize {
        self.constants.len()
    }

    pub fn constant_names(&self) -> String {
        self.constants
            .iter()
            .map(|c| c.name.as_ref())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Lexeme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let consts: Vec<String> = self.constants.iter().map(|c| c.to_string()).collect();
        write!(f, "{} :- [{}]", self.tokens.join(" "), consts.join(", "))
    }
}

#[derive(Clone, Debug)]
pub struct LexicalTemplate {
    syntax: Syntax,
    skeleton: Expr,
    placeholder_types: Vec<SemType>,
    canonical: String,
    key: String,
}

impl PartialEq for LexicalTemplate {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for LexicalTemplate {}

impl LexicalTemplate {
    /// Builds a template from a skeleton whose placeholders `#0..#k-1` first
    /// occur in index order. Returns `None` when that does not hold or the
    /// skeleton is ill-typed.
    pub fn new(syntax: Syntax, skeleton: Expr) -> Option<LexicalTemplate> {
        let mut types: Vec<SemType> = Vec::new();
        let mut ok = true;
        skeleton.visit_preorder(&mut |e| {
            if let Expr::Constant(c) = e {
                if let Some(i) = c.placeholder_index() {
                    if i == types.len() {
                        types.push(c.ty.clone());
                    } else if i > types.len() || types[i] != c.ty {
                        ok = false;
                    }
                }
            }
        });
        if !ok || Category::new(syntax.clone(), skeleton.clone()).is_err() {
            return None;
        }
        let canonical = format!("{}:{}", syntax, print_with_bare_placeholders(&skeleton));
        let sig: Vec<String> = types.iter().map(|t| t.to_string()).collect();
        let key = format!("{}|{}", canonical, sig.join(","));
        Some(LexicalTemplate {
            syntax,
            skeleton,
            placeholder_types: types,
            canonical,
            key,
        })
    }

    pub fn syntax(&self) -> &Syntax {
        &self.syntax
    }

    pub fn skeleton(&self) -> &Expr {
        &self.skeleton
    }

    pub fn arity(&self) -> usize {
        self.placeholder_types.len()
    }

    pub fn placeholder_types(&self) -> &[SemType] {
        &self.placeholder_types
    }

    /// `SYNTAX:SKELETON` with placeholders printed bare, e.g. `NP:#0`.
    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    /// Identity key: the canonical text plus the placeholder types.
    pub fn key(&self) -> &str {
        &self.key
    }

    /// Fills the placeholders with `constants`, `None` on arity or type
    /// mismatch.
    pub fn fill(&self, constants: &[Constant]) -> Option<Category> {
        if constants.len() != self.arity() {
            return None;
        }
        if constants
            .iter()
            .zip(&self.placeholder_types)
            .any(|(c, t)| c.ty != *t)
        {
            return None;
        }
        let sem = self.skeleton.map_constants(&|c: &Constant| {
            c.placeholder_index()
                .map(|i| Expr::Constant(constants[i].clone()))
        });
        Category::new(self.syntax.clone(), sem).ok()
    }
}

impl fmt::Display for LexicalTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // typed form, e.g. `NP : #0:e`
        write!(f, "{} : {}", self.syntax, self.skeleton)
    }
}

/// Abstracts the entry's distinct non-logical constants, in first-occurrence
/// order, into placeholders.
pub fn factor_entry(entry: &LexicalEntry) -> (Lexeme, LexicalTemplate) {
    let sem = entry.category().semantics();
    let mut distinct: Vec<Constant> = Vec::new();
    for c in sem.constants_of() {
        if c.placeholder_index().is_none() && !distinct.contains(&c) {
            distinct.push(c);
        }
    }
    let skeleton = sem.map_constants(&|c: &Constant| {
        distinct
            .iter()
            .position(|d| d == c)
            .map(|i| Expr::Constant(Constant::placeholder(i, c.ty.clone())))
    });
    let template = LexicalTemplate::new(entry.category().syntax().clone(), skeleton)
        .expect("factoring a valid entry yields a valid template");
    (
        Lexeme {
            tokens: entry.tokens().to_vec(),
            constants: distinct,
        },
        template,
    )
}

/// The entry obtained by filling `template` with the lexeme's constants.
pub fn instantiate(template: &LexicalTemplate, lexeme: &Lexeme) -> Option<LexicalEntry> {
    let category = template.fill(&lexeme.constants)?;
    LexicalEntry::new(&lexeme.tokens, category, Origin::InducedGenlex).ok()
}
