//! Splitting one lexical entry into two whose combination by application
//! gives the original back.
//!
//! For an entry `w1..wn :- X : h`, each split point `p` and each
//! subexpression `g` of `h` yields
//!
//! ```text
//! g' = λv1..vk. g              (v1..vk: the variables of h free in g)
//! f  = λy. h[g := (y v1..vk)]
//! ```
//!
//! emitted as `w1..wp :- X/Y : f` + `wp+1..wn :- Y : g'` and as
//! `w1..wp :- Y : g'` + `wp+1..wn :- X\Y : f`, where `Y` is the atomic
//! category for the type of `g'`.

use std::collections::HashSet;

use crate::grammar::{
    backward_application, forward_application, Category, LexicalEntry, Origin, Syntax,
};
use crate::logic::{simplify, Expr, SemType, Variable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitConstraints {
    /// Maximum curried arity of either new semantics.
    pub max_new_arity: usize,
    /// Maximum number of bound variables abstracted out of `g`.
    pub max_abstracted_vars: usize,
}

impl Default for SplitConstraints {
    fn default() -> Self {
        SplitConstraints {
            max_new_arity: 3,
            max_abstracted_vars: 2,
        }
    }
}

/// Atomic category used for an extracted argument of type `ty`.
pub fn syntax_for_type(ty: &SemType) -> Syntax {
    match ty {
        SemType::Primitive(p) if p.as_ref() == "e" => Syntax::atom("NP"),
        SemType::Primitive(p) if p.as_ref() == "t" => Syntax::atom("S"),
        SemType::Function {
            domain,
            range,
            variadic: false,
        } if **domain == SemType::e() && **range == SemType::t() => Syntax::atom("N"),
        _ => Syntax::atom("NP"),
    }
}

/// Renames binders to distinct ids `0, 1, ...` in pre-order.
fn uniquify(expr: &Expr) -> Expr {
    fn go(e: &Expr, scope: &mut Vec<(u32, u32)>, next: &mut u32) -> Expr {
        match e {
            Expr::Constant(_) => e.clone(),
            Expr::Variable(v) => match scope.iter().rev().find(|(old, _)| *old == v.id) {
                Some(&(_, new)) => Expr::var(new, v.ty.clone()),
                None => e.clone(),
            },
            Expr::Lambda(l) => {
                let id = *next;
                *next += 1;
                scope.push((l.param.id, id));
                let body = go(&l.body, scope, next);
                scope.pop();
                Expr::lambda(Variable::new(id, l.param.ty.clone()), body)
            }
            Expr::Literal(lit) => Expr::literal(
                go(&lit.predicate, scope, next),
                lit.args.iter().map(|a| go(a, scope, next)).collect(),
            ),
        }
    }
    go(expr, &mut Vec::new(), &mut 0)
}

/// One candidate extraction site: the node, the binders enclosing it, and
/// its path from the root (child indices; 0 is a literal's predicate).
struct Site {
    node: Expr,
    binders: Vec<Variable>,
    path: Vec<usize>,
}

fn sites(expr: &Expr) -> Vec<Site> {
    fn go(e: &Expr, binders: &mut Vec<Variable>, path: &mut Vec<usize>, out: &mut Vec<Site>) {
        out.push(Site {
            node: e.clone(),
            binders: binders.clone(),
            path: path.clone(),
        });
        match e {
            Expr::Constant(_) | Expr::Variable(_) => {}
            Expr::Lambda(l) => {
                binders.push(l.param.clone());
                path.push(0);
                go(&l.body, binders, path, out);
                path.pop();
                binders.pop();
            }
            Expr::Literal(lit) => {
                path.push(0);
                go(&lit.predicate, binders, path, out);
                path.pop();
                for (i, a) in lit.args.iter().enumerate() {
                    path.push(i + 1);
                    go(a, binders, path, out);
                    path.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(expr, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn replace_at(expr: &Expr, path: &[usize], replacement: &Expr) -> Expr {
    let Some((&head, rest)) = path.split_first() else {
        return replacement.clone();
    };
    match expr {
        Expr::Lambda(l) => Expr::lambda(l.param.clone(), replace_at(&l.body, rest, replacement)),
        Expr::Literal(lit) => {
            let mut pred = lit.predicate.clone();
            let mut args = lit.args.clone();
            if head == 0 {
                pred = replace_at(&pred, rest, replacement);
            } else {
                args[head - 1] = replace_at(&args[head - 1], rest, replacement);
            }
            Expr::literal(pred, args)
        }
        _ => expr.clone(),
    }
}

/// The `(f, g')` semantic pairs for every extraction site of `sem`.
fn semantic_splits(sem: &Expr, constraints: &SplitConstraints) -> Vec<(Expr, Expr)> {
    let h = uniquify(sem);
    let fresh_id = h.max_var_id().map_or(0, |m| m + 1);
    let mut out = Vec::new();
    for site in sites(&h) {
        if site.path.is_empty() || matches!(site.node, Expr::Variable(_)) {
            continue;
        }
        let Ok(g_ty) = site.node.infer_type() else { continue };
        if g_ty.is_variadic() {
            continue;
        }
        let vars: Vec<Variable> = site
            .binders
            .iter()
            .filter(|b| site.node.has_free_var(b.id))
            .cloned()
            .collect();
        if vars.len() > constraints.max_abstracted_vars {
            continue;
        }
        let g_closed = vars
            .iter()
            .rev()
            .fold(site.node.clone(), |body, v| Expr::lambda(v.clone(), body));
        let Ok(closed_ty) = g_closed.infer_type() else { continue };
        let y = Variable::new(fresh_id, closed_ty);
        let call = Expr::literal(
            Expr::Variable(y.clone()),
            vars.iter().map(|v| Expr::Variable(v.clone())).collect(),
        );
        let f = simplify(&Expr::lambda(y, replace_at(&h, &site.path, &call)));
        out.push((f, simplify(&g_closed)));
    }
    out
}

/// Splits a multi-token entry into pairs of entries that recombine, by
/// forward or backward application, into the original category. Every
/// returned pair has been checked to recombine.
pub fn enumerate_splits(
    entry: &LexicalEntry,
    constraints: &SplitConstraints,
) -> Vec<(LexicalEntry, LexicalEntry)> {
    let tokens = entry.tokens();
    if tokens.len() < 2 {
        return Vec::new();
    }
    let original = entry.category();
    let sem = original.semantics();
    let x = original.syntax().clone();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let pairs = semantic_splits(sem, constraints);
    for p in 1..tokens.len() {
        let (lt, rt) = tokens.split_at(p);
        for (f, g) in &pairs {
            // the whole meaning moving to one side is not a split
            if g.alpha_equal(sem) {
                continue;
            }
            let (Ok(f_ty), Ok(g_ty)) = (f.infer_type(), g.infer_type()) else { continue };
            if f_ty.arity() > constraints.max_new_arity || g_ty.arity() > constraints.max_new_arity {
                continue;
            }
            let y = syntax_for_type(&g_ty);
            let arg = Category::new(y.clone(), g.clone());
            let fwd = Category::new(Syntax::forward(x.clone(), y.clone()), f.clone());
            let bwd = Category::new(Syntax::backward(x.clone(), y), f.clone());
            let (Ok(arg), Ok(fwd), Ok(bwd)) = (arg, fwd, bwd) else { continue };

            let candidates = [
                (fwd, arg.clone(), true),
                (arg, bwd, false),
            ];
            for (lc, rc, forward) in candidates {
                let (Ok(left), Ok(right)) = (
                    LexicalEntry::new(lt, lc, Origin::InducedSplit),
                    LexicalEntry::new(rt, rc, Origin::InducedSplit),
                ) else {
                    continue;
                };
                let combined = if forward {
                    forward_application(left.category(), right.category())
                } else {
                    backward_application(left.category(), right.category())
                };
                if !combined.is_some_and(|c| c.alpha_equal(original)) {
                    continue;
                }
                if seen.insert((left.canonical().to_string(), right.canonical().to_string())) {
                    out.push((left, right));
                }
            }
        }
    }
    out
}
