//! CCG semantic parsing into typed lambda-calculus logical forms.
//!
//! The crate is organized bottom-up:
//!
//! * [`logic`]: typed lambda-calculus terms, their text format, normalization
//!   and structural utilities.
//! * [`grammar`]: CCG syntactic categories, combinators, lexicons and the
//!   factored (lexeme + template) view of lexical entries.
//! * [`chart`]: beam-pruned CKY parsing and derivation extraction.
//! * [`model`]: sparse linear scoring of derivation steps.
//! * [`induction`]: lexical hypothesis generation (GENLEX and splitting).
//! * [`learning`]: supervised perceptron and validation-driven training.
//! * [`harness`]: file formats, experiment configs and the CLI commands.

pub mod chart;
pub mod grammar;
pub mod harness;
pub mod induction;
pub mod learning;
pub mod logic;
pub mod model;

pub use chart::{parse_chart, Chart, Derivation, ParseOptions, ParseResult};
pub use grammar::{Category, LexicalEntry, Lexicon, Syntax};
pub use logic::{Expr, LogicError, Ontology, SemType};
pub use model::{FeatureVector, Model};
