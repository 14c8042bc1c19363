use std::collections::{HashSet, VecDeque};

use super::{Expr, SemType, Variable};

/// Beta-normalizes with capture-avoiding substitution and flattens nested
/// applications of the same variadic constant. No eta reduction.
pub fn simplify(expr: &Expr) -> Expr {
    let mut n = Normalizer {
        next_id: expr.max_var_id().map_or(0, |m| m + 1),
    };
    n.normalize(expr)
}

struct Normalizer {
    next_id: u32,
}

impl Normalizer {
    fn fresh(&mut self) -> u32 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    fn normalize(&mut self, expr: &Expr) -> Expr {
        match expr {
            Expr::Constant(_) | Expr::Variable(_) => expr.clone(),
            Expr::Lambda(l) => Expr::lambda(l.param.clone(), self.normalize(&l.body)),
            Expr::Literal(lit) => {
                let mut head = self.normalize(&lit.predicate);
                let mut args: VecDeque<Expr> =
                    lit.args.iter().map(|a| self.normalize(a)).collect();
                loop {
                    match head {
                        Expr::Lambda(l) if !args.is_empty() => {
                            let arg = args.pop_front().unwrap();
                            let free: HashSet<u32> = arg.free_vars().iter().map(|v| v.id).collect();
                            let reduced = self.substitute(&l.body, l.param.id, &arg, &free);
                            head = self.normalize(&reduced);
                        }
                        Expr::Literal(inner) => {
                            for a in inner.args.iter().rev() {
                                args.push_front(a.clone());
                            }
                            head = inner.predicate.clone();
                        }
                        _ => break,
                    }
                }
                if args.is_empty() {
                    return head;
                }
                let args: Vec<Expr> = match &head {
                    Expr::Constant(c) if c.ty.is_variadic() => {
                        let mut flat = Vec::with_capacity(args.len());
                        for a in args {
                            match &a {
                                Expr::Literal(inner) if inner.predicate == head => {
                                    flat.extend(inner.args.iter().cloned())
                                }
                                _ => flat.push(a),
                            }
                        }
                        flat
                    }
                    _ => args.into(),
                };
                Expr::literal(head, args)
            }
        }
    }

    /// `expr[var := value]`, renaming binders that would capture a free
    /// variable of `value`.
    fn substitute(&mut self, expr: &Expr, var: u32, value: &Expr, value_free: &HashSet<u32>) -> Expr {
        if !expr.has_free_var(var) {
            return expr.clone();
        }
        match expr {
            Expr::Constant(_) => expr.clone(),
            Expr::Variable(v) => {
                if v.id == var {
                    value.clone()
                } else {
                    expr.clone()
                }
            }
            Expr::Lambda(l) => {
                if value_free.contains(&l.param.id) {
                    let fresh = Variable::new(self.fresh(), l.param.ty.clone());
                    let fresh_set = HashSet::new();
                    let renamed =
                        self.substitute(&l.body, l.param.id, &Expr::Variable(fresh.clone()), &fresh_set);
                    Expr::lambda(fresh, self.substitute(&renamed, var, value, value_free))
                } else {
                    Expr::lambda(l.param.clone(), self.substitute(&l.body, var, value, value_free))
                }
            }
            Expr::Literal(lit) => Expr::literal(
                self.substitute(&lit.predicate, var, value, value_free),
                lit.args
                    .iter()
                    .map(|a| self.substitute(a, var, value, value_free))
                    .collect(),
            ),
        }
    }
}

impl Expr {
    /// Equality up to consistent renaming of bound variables. Constants are
    /// compared by name and type; argument order matters.
    pub fn alpha_equal(&self, other: &Expr) -> bool {
        fn eq(a: &Expr, b: &Expr, env_a: &mut Vec<u32>, env_b: &mut Vec<u32>) -> bool {
            match (a, b) {
                (Expr::Constant(x), Expr::Constant(y)) => x == y,
                (Expr::Variable(x), Expr::Variable(y)) => {
                    let ix = env_a.iter().rposition(|&id| id == x.id);
                    let iy = env_b.iter().rposition(|&id| id == y.id);
                    match (ix, iy) {
                        (Some(i), Some(j)) => i == j && x.ty == y.ty,
                        (None, None) => x.id == y.id && x.ty == y.ty,
                        _ => false,
                    }
                }
                (Expr::Lambda(x), Expr::Lambda(y)) => {
                    if x.param.ty != y.param.ty {
                        return false;
                    }
                    env_a.push(x.param.id);
                    env_b.push(y.param.id);
                    let r = eq(&x.body, &y.body, env_a, env_b);
                    env_a.pop();
                    env_b.pop();
                    r
                }
                (Expr::Literal(x), Expr::Literal(y)) => {
                    x.args.len() == y.args.len()
                        && eq(&x.predicate, &y.predicate, env_a, env_b)
                        && x.args
                            .iter()
                            .zip(&y.args)
                            .all(|(p, q)| eq(p, q, env_a, env_b))
                }
                _ => false,
            }
        }
        eq(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

/// Applies `f` to `arg` and normalizes, or `None` when `f` is not a
/// (non-variadic) function whose domain is the argument's type.
pub fn apply_exp(f: &Expr, arg: &Expr) -> Option<Expr> {
    let ft = f.infer_type().ok()?;
    let at = arg.infer_type().ok()?;
    match ft {
        SemType::Function {
            domain,
            variadic: false,
            ..
        } if *domain == at => Some(simplify(&Expr::literal(f.clone(), vec![arg.clone()]))),
        _ => None,
    }
}

/// `λx. f (g x)` for `f: <B,C>`, `g: <A,B>`, normalized.
pub fn compose_exp(f: &Expr, g: &Expr) -> Option<Expr> {
    let (f_domain, _) = match f.infer_type().ok()? {
        SemType::Function {
            domain,
            range,
            variadic: false,
        } => (domain, range),
        _ => return None,
    };
    let (g_domain, g_range) = match g.infer_type().ok()? {
        SemType::Function {
            domain,
            range,
            variadic: false,
        } => (domain, range),
        _ => return None,
    };
    if f_domain != g_range {
        return None;
    }
    let id = f.max_var_id().max(g.max_var_id()).map_or(0, |m| m + 1);
    let x = Variable::new(id, g_domain.as_ref().clone());
    let inner = Expr::literal(g.clone(), vec![Expr::Variable(x.clone())]);
    let body = Expr::literal(f.clone(), vec![inner]);
    Some(simplify(&Expr::lambda(x, body)))
}
