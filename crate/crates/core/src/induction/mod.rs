//! Lexical hypothesis generation: template-based GENLEX and entry
//! splitting.

mod genlex;
mod split;

pub use genlex::{candidate_lexicon, collect_templates, distinct_constants, genlex, GenlexConfig};
pub use split::{enumerate_splits, syntax_for_type, SplitConstraints};
