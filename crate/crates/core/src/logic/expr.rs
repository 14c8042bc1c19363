use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::types::apply_types;
use super::{is_connective, LogicError, SemType};

/// Prefix marking template placeholder constants (`#0`, `#1`, ...).
pub const PLACEHOLDER_PREFIX: char = '#';

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constant {
    pub name: Arc<str>,
    pub ty: SemType,
}

impl Constant {
    pub fn new(name: &str, ty: SemType) -> Constant {
        Constant {
            name: Arc::from(name),
            ty,
        }
    }

    pub fn placeholder(index: usize, ty: SemType) -> Constant {
        Constant::new(&format!("{}{}", PLACEHOLDER_PREFIX, index), ty)
    }

    pub fn is_connective(&self) -> bool {
        is_connective(&self.name)
    }

    /// Index of a placeholder constant, `None` for ordinary constants.
    pub fn placeholder_index(&self) -> Option<usize> {
        self.name
            .strip_prefix(PLACEHOLDER_PREFIX)
            .and_then(|rest| rest.parse().ok())
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.ty)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub id: u32,
    pub ty: SemType,
}

impl Variable {
    pub fn new(id: u32, ty: SemType) -> Variable {
        Variable { id, ty }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lambda {
    pub param: Variable,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Literal {
    pub predicate: Expr,
    pub args: Vec<Expr>,
}

/// An immutable typed lambda-calculus term.
///
/// Structural equality (`==`) compares variable ids literally; use
/// [`Expr::alpha_equal`] for equality up to bound-variable renaming.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Constant(Constant),
    Variable(Variable),
    Lambda(Arc<Lambda>),
    Literal(Arc<Literal>),
}

impl Expr {
    pub fn constant(name: &str, ty: SemType) -> Expr {
        Expr::Constant(Constant::new(name, ty))
    }

    pub fn var(id: u32, ty: SemType) -> Expr {
        Expr::Variable(Variable::new(id, ty))
    }

    pub fn lambda(param: Variable, body: Expr) -> Expr {
        Expr::Lambda(Arc::new(Lambda { param, body }))
    }

    /// Builds an application. A literal in predicate position is merged
    /// into its parent (`((p a) b)` becomes `(p a b)`), and an empty argument
    /// list yields the predicate itself.
    pub fn literal(predicate: Expr, args: Vec<Expr>) -> Expr {
        if args.is_empty() {
            return predicate;
        }
        match predicate {
            Expr::Literal(inner) => {
                let mut all = inner.args.clone();
                all.extend(args);
                Expr::Literal(Arc::new(Literal {
                    predicate: inner.predicate.clone(),
                    args: all,
                }))
            }
            predicate => Expr::Literal(Arc::new(Literal { predicate, args })),
        }
    }

    pub fn as_constant(&self) -> Option<&Constant> {
        match self {
            Expr::Constant(c) => Some(c),
            _ => None,
        }
    }

    /// Type of the expression. Fails on ill-typed literals, which cannot be
    /// produced by the parser.
    pub fn infer_type(&self) -> Result<SemType, LogicError> {
        match self {
            Expr::Constant(c) => Ok(c.ty.clone()),
            Expr::Variable(v) => Ok(v.ty.clone()),
            Expr::Lambda(l) => Ok(SemType::function(l.param.ty.clone(), l.body.infer_type()?)),
            Expr::Literal(lit) => {
                let pred = lit.predicate.infer_type()?;
                let args = lit
                    .args
                    .iter()
                    .map(Expr::infer_type)
                    .collect::<Result<Vec<_>, _>>()?;
                apply_types(&pred, args.iter()).map_err(LogicError::Typing)
            }
        }
    }

    pub fn is_well_typed(&self) -> bool {
        self.infer_type().is_ok()
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Variable> {
        fn walk(e: &Expr, bound: &mut Vec<u32>, seen: &mut BTreeSet<u32>, out: &mut Vec<Variable>) {
            match e {
                Expr::Constant(_) => {}
                Expr::Variable(v) => {
                    if !bound.contains(&v.id) && seen.insert(v.id) {
                        out.push(v.clone());
                    }
                }
                Expr::Lambda(l) => {
                    bound.push(l.param.id);
                    walk(&l.body, bound, seen, out);
                    bound.pop();
                }
                Expr::Literal(lit) => {
                    walk(&lit.predicate, bound, seen, out);
                    for a in &lit.args {
                        walk(a, bound, seen, out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut BTreeSet::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_free_var(&self, id: u32) -> bool {
        match self {
            Expr::Constant(_) => false,
            Expr::Variable(v) => v.id == id,
            Expr::Lambda(l) => l.param.id != id && l.body.has_free_var(id),
            Expr::Literal(lit) => {
                lit.predicate.has_free_var(id) || lit.args.iter().any(|a| a.has_free_var(id))
            }
        }
    }

    /// Largest variable id used anywhere (binders included), if any.
    pub fn max_var_id(&self) -> Option<u32> {
        match self {
            Expr::Constant(_) => None,
            Expr::Variable(v) => Some(v.id),
            Expr::Lambda(l) => Some(l.param.id).max(l.body.max_var_id()),
            Expr::Literal(lit) => lit
                .args
                .iter()
                .map(Expr::max_var_id)
                .fold(lit.predicate.max_var_id(), Option::max),
        }
    }

    /// Every node of the term tree in pre-order, starting with `self`.
    /// Lambda parameters are binders, not nodes.
    pub fn subexpressions(&self) -> Vec<Expr> {
        let mut out = Vec::new();
        self.visit_preorder(&mut |e| out.push(e.clone()));
        out
    }

    pub fn visit_preorder<F: FnMut(&Expr)>(&self, f: &mut F) {
        f(self);
        match self {
            Expr::Constant(_) | Expr::Variable(_) => {}
            Expr::Lambda(l) => l.body.visit_preorder(f),
            Expr::Literal(lit) => {
                lit.predicate.visit_preorder(f);
                for a in &lit.args {
                    a.visit_preorder(f);
                }
            }
        }
    }

    /// Non-logical constants in left-to-right order, duplicates kept.
    pub fn constants_of(&self) -> Vec<Constant> {
        let mut out = Vec::new();
        self.visit_preorder(&mut |e| {
            if let Expr::Constant(c) = e {
                if !c.is_connective() {
                    out.push(c.clone());
                }
            }
        });
        out
    }

    /// Replaces every constant for which `f` returns a value.
    pub fn map_constants<F>(&self, f: &F) -> Expr
    where
        F: Fn(&Constant) -> Option<Expr>,
    {
        match self {
            Expr::Constant(c) => f(c).unwrap_or_else(|| self.clone()),
            Expr::Variable(_) => self.clone(),
            Expr::Lambda(l) => Expr::lambda(l.param.clone(), l.body.map_constants(f)),
            Expr::Literal(lit) => Expr::literal(
                lit.predicate.map_constants(f),
                lit.args.iter().map(|a| a.map_constants(f)).collect(),
            ),
        }
    }

    /// Number of nodes, as enumerated by [`Expr::subexpressions`].
    pub fn size(&self) -> usize {
        match self {
            Expr::Constant(_) | Expr::Variable(_) => 1,
            Expr::Lambda(l) => 1 + l.body.size(),
            Expr::Literal(lit) => {
                1 + lit.predicate.size() + lit.args.iter().map(Expr::size).sum::<usize>()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_expression, Ontology};

    fn p(text: &str) -> Expr {
        parse_expression(text, &mut Ontology::permissive()).unwrap()
    }

    #[test]
    fn infers_types() {
        assert_eq!(p("(lambda $0:e (city:<e,t> $0))").infer_type().unwrap().to_string(), "<e,t>");
        assert_eq!(p("austin:e").infer_type().unwrap().to_string(), "e");
        assert_eq!(p("(border:<e,<e,t>> texas:e)").infer_type().unwrap().to_string(), "<e,t>");
        assert_eq!(
            p("(and:<t*,t> (city:<e,t> austin:e) (major:<e,t> austin:e))")
                .infer_type()
                .unwrap()
                .to_string(),
            "t"
        );
    }

    #[test]
    fn ill_typed_literal_reports_typing_error() {
        let bad = Expr::literal(
            Expr::constant("city", SemType::function(SemType::e(), SemType::t())),
            vec![Expr::constant("x", SemType::t())],
        );
        assert!(matches!(bad.infer_type(), Err(LogicError::Typing(_))));
    }

    #[test]
    fn subexpressions_in_preorder() {
        assert_eq!(p("austin:e").subexpressions().len(), 1);
        let subs = p("(city:<e,t> austin:e)").subexpressions();
        assert_eq!(subs.len(), 3);
        assert!(matches!(subs[0], Expr::Literal(_)));
        assert_eq!(subs[1].as_constant().unwrap().name.as_ref(), "city");
        assert_eq!(subs[2].as_constant().unwrap().name.as_ref(), "austin");
    }

    #[test]
    fn constants_skip_connectives_and_keep_duplicates() {
        let names = |t: &str| {
            p(t).constants_of()
                .iter()
                .map(|c| c.name.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(names("(border:<e,<e,t>> texas:e oklahoma:e)"), ["border", "texas", "oklahoma"]);
        assert_eq!(names("(and:<t*,t> a:t a:t)"), ["a", "a"]);
        assert_eq!(names("(not:<t,t> (city:<e,t> austin:e))"), ["city", "austin"]);
    }

    #[test]
    fn nested_literal_predicates_merge() {
        let border = Expr::constant("border", SemType::function(SemType::e(), SemType::function(SemType::e(), SemType::t())));
        let tx = Expr::constant("texas", SemType::e());
        let ok = Expr::constant("oklahoma", SemType::e());
        let nested = Expr::literal(Expr::literal(border.clone(), vec![tx.clone()]), vec![ok.clone()]);
        assert_eq!(nested, Expr::literal(border, vec![tx, ok]));
    }

    #[test]
    fn free_vars_and_max_id() {
        let e = p("(lambda $3:e (lambda $5:e (border:<e,<e,t>> $5 $3)))");
        assert!(e.is_closed());
        assert_eq!(e.max_var_id(), Some(5));
        if let Expr::Lambda(l) = &e {
            let fv = l.body.free_vars();
            assert_eq!(fv.len(), 1);
            assert_eq!(fv[0].id, 3);
        }
        assert_eq!(p("texas:e").max_var_id(), None);
    }
}
