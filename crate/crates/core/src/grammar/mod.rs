//! CCG categories, combinators and lexicons.

mod category;
mod combinators;
mod factored;
mod lexicon;
mod syntax;

pub use category::{Category, LexicalEntry, Origin};
pub use combinators::{
    backward_application, backward_composition, forward_application, forward_composition, Rule,
};
pub use factored::{factor_entry, instantiate, LexicalTemplate, Lexeme};
pub use lexicon::{LexicalSource, Lexicon, Overlay};
pub use syntax::{Direction, Syntax, SyntaxInventory, BUILTIN_ATOMS};

use crate::logic::LogicError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GrammarError {
    #[error("category syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared atomic category `{0}`")]
    UnknownAtom(String),
    #[error("semantics error at offset {offset}: {source}")]
    Logic { offset: usize, source: LogicError },
    #[error("invalid category: {0}")]
    Validation(String),
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        source: Box<GrammarError>,
    },
}

impl GrammarError {
    pub(crate) fn shifted(self, by: usize) -> GrammarError {
        match self {
            GrammarError::Syntax { offset, message } => GrammarError::Syntax {
                offset: offset + by,
                message,
            },
            GrammarError::Logic { offset, source } => GrammarError::Logic {
                offset: offset + by,
                source,
            },
            other => other,
        }
    }
}
