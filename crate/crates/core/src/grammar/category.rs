use std::fmt;

use super::{GrammarError, Syntax, SyntaxInventory};
use crate::logic::{parse_expression, Expr, Ontology};

/// A syntactic category paired with its semantics.
#[derive(Clone, Debug)]
pub struct Category {
    syntax: Syntax,
    semantics: Expr,
    canonical: String,
}

impl PartialEq for Category {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for Category {}

impl std::hash::Hash for Category {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical.hash(state)
    }
}

impl Category {
    /// Validates that the semantics is closed and well-typed, and that a
    /// slash category carries function-typed semantics.
    pub fn new(syntax: Syntax, semantics: Expr) -> Result<Category, GrammarError> {
        let free = semantics.free_vars();
        if !free.is_empty() {
            return Err(GrammarError::Validation(format!(
                "semantics {} has free variables",
                semantics
            )));
        }
        let ty = semantics
            .infer_type()
            .map_err(|e| GrammarError::Validation(e.to_string()))?;
        if syntax.is_slash() && !ty.is_function() {
            return Err(GrammarError::Validation(format!(
                "category {} needs function-typed semantics, found {}",
                syntax, ty
            )));
        }
        let canonical = format!("{} : {}", syntax, semantics);
        Ok(Category {
            syntax,
            semantics,
            canonical,
        })
    }

    pub fn syntax(&self) -> &Syntax {
        &self.syntax
    }

    pub fn semantics(&self) -> &Expr {
        &self.semantics
    }

    /// `SYNTAX : EXPRESSION` with canonical variable numbering. Two
    /// categories are equal iff their canonical texts are.
    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    /// Same syntax and alpha-equal semantics.
    pub fn alpha_equal(&self, other: &Category) -> bool {
        self.syntax == other.syntax && self.semantics.alpha_equal(&other.semantics)
    }

    /// Parses `SYNTAX : EXPRESSION`.
    pub fn parse(
        text: &str,
        ontology: &mut Ontology,
        inventory: &SyntaxInventory,
    ) -> Result<Category, GrammarError> {
        let (syn_text, sem_text) = text.split_once(':').ok_or(GrammarError::Syntax {
            offset: text.len(),
            message: "expected `SYNTAX : EXPRESSION`".into(),
        })?;
        let syntax = Syntax::parse(syn_text, inventory)?;
        let sem_offset = syn_text.len() + 1;
        let semantics = parse_expression(sem_text, ontology).map_err(|e| GrammarError::Logic {
            offset: sem_offset + e.offset().unwrap_or(0),
            source: e,
        })?;
        Category::new(syntax, semantics)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical)
    }
}

/// Where a lexical entry came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    Seed,
    InducedGenlex,
    InducedSplit,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Seed => "seed",
            Origin::InducedGenlex => "induced-genlex",
            Origin::InducedSplit => "induced-split",
        })
    }
}

/// A mapping from a token sequence to a category.
#[derive(Clone, Debug)]
pub struct LexicalEntry {
    tokens: Vec<String>,
    category: Category,
    origin: Origin,
    key: String,
}

impl PartialEq for LexicalEntry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for LexicalEntry {}

impl LexicalEntry {
    /// Tokens are lowercased; empty token lists and tokens containing
    /// whitespace are rejected.
    pub fn new<S: AsRef<str>>(
        tokens: &[S],
        category: Category,
        origin: Origin,
    ) -> Result<LexicalEntry, GrammarError> {
        if tokens.is_empty() {
            return Err(GrammarError::Validation("entry without tokens".into()));
        }
        let mut lowered = Vec::with_capacity(tokens.len());
        for t in tokens {
            let t = t.as_ref();
            if t.is_empty() || t.contains(char::is_whitespace) {
                return Err(GrammarError::Validation(format!("bad token `{}`", t)));
            }
            lowered.push(t.to_lowercase());
        }
        let key = format!("{} :- {}", lowered.join(" "), category.canonical());
        Ok(LexicalEntry {
            tokens: lowered,
            category,
            origin,
            key,
        })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn category(&self) -> &Category {
        &self.category
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn with_origin(&self, origin: Origin) -> LexicalEntry {
        LexicalEntry {
            origin,
            ..self.clone()
        }
    }

    /// `tokens :- SYNTAX : EXPRESSION`, the lexicon file line. Identifies
    /// the entry regardless of origin.
    pub fn canonical(&self) -> &str {
        &self.key
    }

    /// Parses a lexicon file line `token token :- SYNTAX : EXPRESSION`.
    pub fn parse(
        line: &str,
        ontology: &mut Ontology,
        inventory: &SyntaxInventory,
        origin: Origin,
    ) -> Result<LexicalEntry, GrammarError> {
        let (tokens, cat) = line.split_once(":-").ok_or(GrammarError::Syntax {
            offset: 0,
            message: "expected `tokens :- CATEGORY`".into(),
        })?;
        let tokens: Vec<&str> = tokens.split_whitespace().collect();
        let offset = line.find(":-").unwrap() + 2;
        let category = Category::parse(cat, ontology, inventory).map_err(|e| e.shifted(offset))?;
        LexicalEntry::new(&tokens, category, origin)
    }
}

impl fmt::Display for LexicalEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(text: &str) -> Result<Category, GrammarError> {
        Category::parse(text, &mut Ontology::permissive(), &SyntaxInventory::default())
    }

    #[test]
    fn parses_categories() {
        let np = cat("NP : texas:e").unwrap();
        assert_eq!(np.syntax(), &Syntax::atom("NP"));
        assert_eq!(np.canonical(), "NP : texas:e");
        let tv = cat("(S\\NP)/NP : (lambda $0:e (lambda $1:e (border:<e,<e,t>> $1 $0)))").unwrap();
        assert_eq!(tv.syntax().to_string(), "(S\\NP)/NP");
        assert_eq!(tv.semantics().infer_type().unwrap().to_string(), "<e,<e,t>>");
    }

    #[test]
    fn slash_needs_function_semantics() {
        assert!(matches!(cat("S/NP : texas:e"), Err(GrammarError::Validation(_))));
    }

    #[test]
    fn reports_offsets_in_semantics() {
        match cat("NP : (city:<e,t> austin:e") {
            Err(GrammarError::Logic { offset, .. }) => assert_eq!(offset, 25),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn parses_entries() {
        let e = LexicalEntry::parse(
            "Texas :- NP : texas:e",
            &mut Ontology::permissive(),
            &SyntaxInventory::default(),
            Origin::Seed,
        )
        .unwrap();
        assert_eq!(e.tokens(), ["texas"]);
        assert_eq!(e.to_string(), "texas :- NP : texas:e");
        assert!(LexicalEntry::parse(
            " :- NP : texas:e",
            &mut Ontology::permissive(),
            &SyntaxInventory::default(),
            Origin::Seed
        )
        .is_err());
    }
}
