use std::fmt;

use super::{Category, Direction, Syntax};
use crate::logic::{apply_exp, compose_exp};

/// The binary combinators. Syntax matching is structural equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    ForwardApplication,
    BackwardApplication,
    ForwardComposition,
    BackwardComposition,
}

impl Rule {
    pub const ALL: [Rule; 4] = [
        Rule::ForwardApplication,
        Rule::BackwardApplication,
        Rule::ForwardComposition,
        Rule::BackwardComposition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::ForwardApplication => "fa",
            Rule::BackwardApplication => "ba",
            Rule::ForwardComposition => "fc",
            Rule::BackwardComposition => "bc",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn apply(self, left: &Category, right: &Category) -> Option<Category> {
        match self {
            Rule::ForwardApplication => forward_application(left, right),
            Rule::BackwardApplication => backward_application(left, right),
            Rule::ForwardComposition => forward_composition(left, right),
            Rule::BackwardComposition => backward_composition(left, right),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `A/B : f` + `B : a` => `A : f a`
pub fn forward_application(left: &Category, right: &Category) -> Option<Category> {
    let (result, arg) = left.syntax().split(Direction::Forward)?;
    if arg != right.syntax() {
        return None;
    }
    let sem = apply_exp(left.semantics(), right.semantics())?;
    Category::new(result.clone(), sem).ok()
}

/// `B : a` + `A\B : f` => `A : f a`
pub fn backward_application(left: &Category, right: &Category) -> Option<Category> {
    let (result, arg) = right.syntax().split(Direction::Backward)?;
    if arg != left.syntax() {
        return None;
    }
    let sem = apply_exp(right.semantics(), left.semantics())?;
    Category::new(result.clone(), sem).ok()
}

/// `A/B : f` + `B/C : g` => `A/C : λx.f (g x)`
pub fn forward_composition(left: &Category, right: &Category) -> Option<Category> {
    let (a, b) = left.syntax().split(Direction::Forward)?;
    let (b2, c) = right.syntax().split(Direction::Forward)?;
    if b != b2 {
        return None;
    }
    let sem = compose_exp(left.semantics(), right.semantics())?;
    Category::new(Syntax::forward(a.clone(), c.clone()), sem).ok()
}

/// `B\C : g` + `A\B : f` => `A\C : λx.f (g x)`
pub fn backward_composition(left: &Category, right: &Category) -> Option<Category> {
    let (b, c) = left.syntax().split(Direction::Backward)?;
    let (a, b2) = right.syntax().split(Direction::Backward)?;
    if b != b2 {
        return None;
    }
    let sem = compose_exp(right.semantics(), left.semantics())?;
    Category::new(Syntax::backward(a.clone(), c.clone()), sem).ok()
}
