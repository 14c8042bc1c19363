use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use super::{factor_entry, instantiate, GrammarError, LexicalEntry, LexicalTemplate, Lexeme, Origin, SyntaxInventory};
use crate::logic::Ontology;

/// Anything the chart parser can look token spans up in.
pub trait LexicalSource {
    /// Distinct entries for exactly this token sequence.
    fn lookup(&self, tokens: &[String]) -> Vec<Arc<LexicalEntry>>;
}

/// Stored entries indexed by token sequence, plus a factored section of
/// lexemes and templates that expands on lookup.
///
/// Mutation must be serialized by the caller; shared reads are fine.
#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: BTreeMap<Vec<String>, Vec<Arc<LexicalEntry>>>,
    keys: HashSet<String>,
    lexemes: BTreeMap<Vec<String>, Vec<Lexeme>>,
    templates: Vec<LexicalTemplate>,
    inventory: SyntaxInventory,
}

impl Lexicon {
    pub fn new() -> Lexicon {
        Lexicon::default()
    }

    pub fn with_inventory(inventory: SyntaxInventory) -> Lexicon {
        Lexicon {
            inventory,
            ..Lexicon::default()
        }
    }

    pub fn inventory(&self) -> &SyntaxInventory {
        &self.inventory
    }

    /// Adds an entry; returns false if an identical one (same tokens and
    /// canonical category) is already stored.
    pub fn add(&mut self, entry: LexicalEntry) -> bool {
        if self.keys.contains(entry.canonical()) {
            return false;
        }
        self.keys.insert(entry.canonical().to_string());
        self.entries
            .entry(entry.tokens().to_vec())
            .or_default()
            .push(Arc::new(entry));
        true
    }

    pub fn contains(&self, entry: &LexicalEntry) -> bool {
        self.keys.contains(entry.canonical())
    }

    /// Number of stored (non-factored) entries.
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Stored entries sorted by tokens, insertion order within a token
    /// sequence.
    pub fn entries(&self) -> impl Iterator<Item = &Arc<LexicalEntry>> {
        self.entries.values().flatten()
    }

    pub fn add_lexeme(&mut self, lexeme: Lexeme) -> bool {
        let bucket = self.lexemes.entry(lexeme.tokens.clone()).or_default();
        if bucket.contains(&lexeme) {
            return false;
        }
        bucket.push(lexeme);
        true
    }

    pub fn add_template(&mut self, template: LexicalTemplate) -> bool {
        if self.templates.contains(&template) {
            return false;
        }
        self.templates.push(template);
        true
    }

    pub fn lexemes(&self) -> impl Iterator<Item = &Lexeme> {
        self.lexemes.values().flatten()
    }

    pub fn templates(&self) -> &[LexicalTemplate] {
        &self.templates
    }

    /// Factors every stored entry, returning the distinct lexemes and
    /// templates in entry order.
    pub fn factored(&self) -> (Vec<Lexeme>, Vec<LexicalTemplate>) {
        let mut lexemes: Vec<Lexeme> = Vec::new();
        let mut templates: Vec<LexicalTemplate> = Vec::new();
        for e in self.entries() {
            let (lx, t) = factor_entry(e);
            if !lexemes.contains(&lx) {
                lexemes.push(lx);
            }
            if !templates.contains(&t) {
                templates.push(t);
            }
        }
        (lexemes, templates)
    }

    /// Reads the lexicon file format: `token token :- SYNTAX : EXPRESSION`
    /// per line, `#` comments, blank lines ignored. Lines `:atom NAME`
    /// declare extra atomic categories.
    pub fn parse(text: &str, ontology: &mut Ontology) -> Result<Lexicon, GrammarError> {
        Lexicon::parse_with(text, ontology, SyntaxInventory::default(), Origin::Seed)
    }

    pub fn parse_with(
        text: &str,
        ontology: &mut Ontology,
        inventory: SyntaxInventory,
        origin: Origin,
    ) -> Result<Lexicon, GrammarError> {
        let mut lexicon = Lexicon::with_inventory(inventory);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(atom) = line.strip_prefix(":atom") {
                let atom = atom.trim();
                if atom.is_empty() || !atom.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(GrammarError::Line {
                        line: idx + 1,
                        source: Box::new(GrammarError::UnknownAtom(atom.to_string())),
                    });
                }
                lexicon.inventory.declare(atom);
                continue;
            }
            let entry = LexicalEntry::parse(line, ontology, &lexicon.inventory, origin).map_err(|e| {
                GrammarError::Line {
                    line: idx + 1,
                    source: Box::new(e),
                }
            })?;
            lexicon.add(entry);
        }
        Ok(lexicon)
    }

    /// Renders the stored entries in file format, sorted by tokens.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for atom in self.inventory.extra_atoms() {
            let _ = writeln!(out, ":atom {}", atom);
        }
        for e in self.entries() {
            let _ = writeln!(out, "{}", e);
        }
        out
    }
}

impl LexicalSource for Lexicon {
    fn lookup(&self, tokens: &[String]) -> Vec<Arc<LexicalEntry>> {
        let mut out: Vec<Arc<LexicalEntry>> = Vec::new();
        let mut seen: HashSet<&str> = HashSet::new();
        if let Some(stored) = self.entries.get(tokens) {
            for e in stored {
                seen.insert(e.canonical());
                out.push(e.clone());
            }
        }
        if let Some(lexemes) = self.lexemes.get(tokens) {
            let mut expanded = Vec::new();
            for lx in lexemes {
                for t in &self.templates {
                    if let Some(e) = instantiate(t, lx) {
                        expanded.push(e);
                    }
                }
            }
            let mut fresh: HashSet<String> = HashSet::new();
            for e in expanded {
                if !seen.contains(e.canonical()) && fresh.insert(e.canonical().to_string()) {
                    out.push(Arc::new(e));
                }
            }
        }
        out
    }
}

/// A base lexicon seen together with extra candidate entries. Base entries
/// win when both hold the same entry.
pub struct Overlay<'a> {
    pub base: &'a dyn LexicalSource,
    pub extra: &'a dyn LexicalSource,
}

impl LexicalSource for Overlay<'_> {
    fn lookup(&self, tokens: &[String]) -> Vec<Arc<LexicalEntry>> {
        let mut out = self.base.lookup(tokens);
        let seen: HashSet<String> = out.iter().map(|e| e.canonical().to_string()).collect();
        for e in self.extra.lookup(tokens) {
            if !seen.contains(e.canonical()) {
                out.push(e);
            }
        }
        out
    }
}
