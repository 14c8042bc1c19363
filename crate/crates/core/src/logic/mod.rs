//! Typed lambda-calculus logical forms.

mod expr;
mod normalize;
mod ontology;
mod text;
mod types;

pub use expr::{Constant, Expr, Lambda, Literal, Variable, PLACEHOLDER_PREFIX};
pub use normalize::{apply_exp, compose_exp, simplify};
pub use ontology::{is_connective, Ontology, OntologyError, CONNECTIVES};
pub use text::{parse_expression, print_expression, print_with_bare_placeholders};
pub use types::{parse_type, SemType};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LogicError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared type `{name}` at offset {offset}")]
    UndeclaredType { name: String, offset: usize },
    #[error("unknown constant `{name}` at offset {offset}")]
    UnknownConstant { name: String, offset: usize },
    #[error("unbound variable ${id} at offset {offset}")]
    UnboundVariable { id: u32, offset: usize },
    #[error("type mismatch at offset {offset}: {message}")]
    TypeMismatch { offset: usize, message: String },
    #[error("typing error: {0}")]
    Typing(String),
}

impl LogicError {
    /// Character offset of the error in the parsed text, when known.
    pub fn offset(&self) -> Option<usize> {
        match self {
            LogicError::Syntax { offset, .. }
            | LogicError::UndeclaredType { offset, .. }
            | LogicError::UnknownConstant { offset, .. }
            | LogicError::UnboundVariable { offset, .. }
            | LogicError::TypeMismatch { offset, .. } => Some(*offset),
            LogicError::Typing(_) => None,
        }
    }
}
