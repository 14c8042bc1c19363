//! Test oracles shared by the integration tests: a random well-typed term
//! generator, an independent de Bruijn normalizer, and an exhaustive
//! derivation enumerator.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use semparse::chart::{Backpointer, Chart};
use semparse::grammar::{Category, LexicalSource, Rule};
use semparse::logic::{Expr, SemType, Variable};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join("geo")
}

fn ty(text: &str) -> SemType {
    let o = semparse::logic::Ontology::new();
    semparse::logic::parse_type(text, &o).unwrap()
}

/// Random closed, well-typed terms. Binder ids are drawn from a small range
/// so shadowing and capture-prone redexes are common.
pub struct TermGen {
    rng: StdRng,
    constants: Vec<(String, SemType)>,
    max_id: u32,
}

impl TermGen {
    pub fn new(rng: StdRng) -> TermGen {
        let constants = [
            ("a", "e"),
            ("b", "e"),
            ("c", "e"),
            ("p", "<e,t>"),
            ("q", "<e,t>"),
            ("r", "<e,<e,t>>"),
            ("every", "<<e,t>,t>"),
            ("f", "<e,e>"),
            ("not", "<t,t>"),
        ]
        .iter()
        .map(|(n, t)| (n.to_string(), ty(t)))
        .collect();
        TermGen {
            rng,
            constants,
            max_id: 3,
        }
    }

    fn pick_type(&mut self) -> SemType {
        let choices = ["e", "t", "<e,t>", "<e,<e,t>>"];
        ty(choices.choose(&mut self.rng).unwrap())
    }

    /// A term of type `t` whose nesting depth is at most `depth`.
    pub fn term(&mut self, depth: usize) -> Expr {
        let t = SemType::t();
        self.gen(&t, &mut Vec::new(), depth)
    }

    pub fn term_of(&mut self, target: &SemType, depth: usize) -> Expr {
        self.gen(target, &mut Vec::new(), depth)
    }

    fn visible(env: &[Variable]) -> Vec<Variable> {
        let mut out: Vec<Variable> = Vec::new();
        for v in env.iter().rev() {
            if !out.iter().any(|o| o.id == v.id) {
                out.push(v.clone());
            }
        }
        out
    }

    fn leaf(&mut self, target: &SemType, env: &mut Vec<Variable>) -> Expr {
        let mut options: Vec<Expr> = Self::visible(env)
            .into_iter()
            .filter(|v| v.ty == *target)
            .map(Expr::Variable)
            .collect();
        options.extend(
            self.constants
                .iter()
                .filter(|(_, t)| t == target)
                .map(|(n, t)| Expr::constant(n, t.clone())),
        );
        if let Some(e) = options.choose(&mut self.rng) {
            return e.clone();
        }
        match target {
            SemType::Function { domain, range, .. } => {
                let v = Variable::new(self.rng.gen_range(0..=self.max_id), (**domain).clone());
                env.push(v.clone());
                let body = self.leaf(range, env);
                env.pop();
                Expr::lambda(v, body)
            }
            _ if *target == SemType::t() => {
                let a = self.leaf(&SemType::e(), env);
                Expr::literal(Expr::constant("p", ty("<e,t>")), vec![a])
            }
            _ => Expr::constant("a", SemType::e()),
        }
    }

    /// Heads whose curried application yields `target`, with argument types.
    fn heads(&self, target: &SemType, env: &[Variable]) -> Vec<(Expr, Vec<SemType>)> {
        let mut out = Vec::new();
        let mut candidates: Vec<Expr> = self
            .constants
            .iter()
            .map(|(n, t)| Expr::constant(n, t.clone()))
            .collect();
        candidates.extend(Self::visible(env).into_iter().map(Expr::Variable));
        for head in candidates {
            let mut t = head.infer_type().unwrap();
            let mut args = Vec::new();
            while let SemType::Function {
                domain,
                range,
                variadic: false,
            } = t
            {
                args.push((*domain).clone());
                t = (*range).clone();
                if t == *target {
                    out.push((head.clone(), args.clone()));
                }
            }
        }
        out
    }

    fn gen(&mut self, target: &SemType, env: &mut Vec<Variable>, depth: usize) -> Expr {
        if depth == 0 {
            return self.leaf(target, env);
        }
        let choice = self.rng.gen_range(0..10);
        match choice {
            0 => self.leaf(target, env),
            1 | 2 if target.is_function() => {
                let SemType::Function { domain, range, .. } = target else { unreachable!() };
                let v = Variable::new(self.rng.gen_range(0..=self.max_id), (**domain).clone());
                env.push(v.clone());
                let body = self.gen(range, env, depth - 1);
                env.pop();
                Expr::lambda(v, body)
            }
            3 | 4 => {
                // beta redex
                let arg_ty = self.pick_type();
                let v = Variable::new(self.rng.gen_range(0..=self.max_id), arg_ty.clone());
                env.push(v.clone());
                let body = self.gen(target, env, depth - 1);
                env.pop();
                let arg = self.gen(&arg_ty, env, depth - 1);
                Expr::literal(Expr::lambda(v, body), vec![arg])
            }
            5 | 6 if *target == SemType::t() => {
                let conn = if self.rng.gen_bool(0.5) { "and" } else { "or" };
                let n = self.rng.gen_range(2..=3);
                let args = (0..n).map(|_| self.gen(target, env, depth - 1)).collect();
                Expr::literal(Expr::constant(conn, ty("<t*,t>")), args)
            }
            _ => {
                let heads = self.heads(target, env);
                if heads.is_empty() {
                    return self.leaf(target, env);
                }
                let (head, arg_tys) = heads[self.rng.gen_range(0..heads.len())].clone();
                let args = arg_tys.iter().map(|t| self.gen(t, env, depth - 1)).collect();
                Expr::literal(head, args)
            }
        }
    }
}

/// Nameless terms: variables are binder distances.
#[derive(Clone, Debug, PartialEq)]
pub enum Db {
    Const(String, String, bool),
    Var(usize),
    Lam(String, Box<Db>),
    App(Box<Db>, Vec<Db>),
}

pub fn to_db(e: &Expr) -> Db {
    fn go(e: &Expr, scope: &mut Vec<u32>) -> Db {
        match e {
            Expr::Constant(c) => Db::Const(c.name.to_string(), c.ty.to_string(), c.ty.is_variadic()),
            Expr::Variable(v) => {
                let pos = scope.iter().rposition(|&id| id == v.id).expect("closed term");
                Db::Var(scope.len() - 1 - pos)
            }
            Expr::Lambda(l) => {
                scope.push(l.param.id);
                let body = go(&l.body, scope);
                scope.pop();
                Db::Lam(l.param.ty.to_string(), Box::new(body))
            }
            Expr::Literal(lit) => Db::App(
                Box::new(go(&lit.predicate, scope)),
                lit.args.iter().map(|a| go(a, scope)).collect(),
            ),
        }
    }
    go(e, &mut Vec::new())
}

fn shift(t: &Db, by: usize, cutoff: usize) -> Db {
    match t {
        Db::Const(..) => t.clone(),
        Db::Var(k) if *k >= cutoff => Db::Var(k + by),
        Db::Var(_) => t.clone(),
        Db::Lam(ty, b) => Db::Lam(ty.clone(), Box::new(shift(b, by, cutoff + 1))),
        Db::App(h, args) => Db::App(
            Box::new(shift(h, by, cutoff)),
            args.iter().map(|a| shift(a, by, cutoff)).collect(),
        ),
    }
}

/// `body[0 := value]` with the outer binder removed.
fn subst(body: &Db, depth: usize, value: &Db) -> Db {
    match body {
        Db::Const(..) => body.clone(),
        Db::Var(k) if *k == depth => shift(value, depth, 0),
        Db::Var(k) if *k > depth => Db::Var(k - 1),
        Db::Var(_) => body.clone(),
        Db::Lam(ty, b) => Db::Lam(ty.clone(), Box::new(subst(b, depth + 1, value))),
        Db::App(h, args) => Db::App(
            Box::new(subst(h, depth, value)),
            args.iter().map(|a| subst(a, depth, value)).collect(),
        ),
    }
}

/// Full beta normal form, with application spines merged and nested
/// applications of the same variadic constant flattened.
pub fn db_normalize(t: &Db) -> Db {
    match t {
        Db::Const(..) | Db::Var(_) => t.clone(),
        Db::Lam(ty, b) => Db::Lam(ty.clone(), Box::new(db_normalize(b))),
        Db::App(h, args) => {
            let mut head = db_normalize(h);
            let mut args: Vec<Db> = args.iter().map(db_normalize).collect();
            loop {
                match head {
                    Db::Lam(_, body) if !args.is_empty() => {
                        let a = args.remove(0);
                        head = db_normalize(&subst(&body, 0, &a));
                    }
                    Db::App(ih, iargs) => {
                        let mut all = iargs;
                        all.extend(args);
                        args = all;
                        head = *ih;
                    }
                    _ => break,
                }
            }
            if args.is_empty() {
                return head;
            }
            if let Db::Const(_, _, true) = &head {
                let mut flat = Vec::new();
                for a in args {
                    match a {
                        Db::App(ih, iargs) if *ih == head => flat.extend(iargs),
                        other => flat.push(other),
                    }
                }
                args = flat;
            }
            Db::App(Box::new(head), args)
        }
    }
}

/// Every derivation of the whole sentence, as its root category (one entry
/// per derivation), by exhaustive recursion over splits.
pub fn brute_force(tokens: &[String], lexicon: &dyn LexicalSource, max_lexical_span: usize) -> Vec<Category> {
    fn all(
        i: usize,
        j: usize,
        tokens: &[String],
        lexicon: &dyn LexicalSource,
        max: usize,
        memo: &mut HashMap<(usize, usize), Vec<Category>>,
    ) -> Vec<Category> {
        if let Some(hit) = memo.get(&(i, j)) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if j - i <= max {
            out.extend(lexicon.lookup(&tokens[i..j]).iter().map(|e| e.category().clone()));
        }
        for k in (i + 1)..j {
            let lefts = all(i, k, tokens, lexicon, max, memo);
            let rights = all(k, j, tokens, lexicon, max, memo);
            for l in &lefts {
                for r in &rights {
                    for rule in Rule::ALL {
                        if let Some(c) = rule.apply(l, r) {
                            out.push(c);
                        }
                    }
                }
            }
        }
        memo.insert((i, j), out.clone());
        out
    }
    if tokens.is_empty() {
        return Vec::new();
    }
    all(0, tokens.len(), tokens, lexicon, max_lexical_span, &mut HashMap::new())
}

/// Derivation counts per canonical category text.
pub fn category_counts<'a, I: IntoIterator<Item = &'a Category>>(cats: I) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for c in cats {
        *out.entry(c.canonical().to_string()).or_insert(0) += 1;
    }
    out
}

/// Number of derivations packed into each root-cell item of `chart`, keyed
/// by canonical category text.
pub fn chart_root_counts(chart: &Chart) -> BTreeMap<String, usize> {
    fn count(chart: &Chart, s: usize, e: usize, idx: usize, memo: &mut HashMap<(usize, usize, usize), usize>) -> usize {
        if let Some(&c) = memo.get(&(s, e, idx)) {
            return c;
        }
        let mut total = 0;
        for bp in &chart.cell(s, e)[idx].backpointers {
            total += match bp {
                Backpointer::Lexical { .. } => 1,
                Backpointer::Binary {
                    split, left, right, ..
                } => count(chart, s, *split, *left, memo) * count(chart, *split, e, *right, memo),
            };
        }
        memo.insert((s, e, idx), total);
        total
    }
    let n = chart.tokens().len();
    let mut memo = HashMap::new();
    let mut out = BTreeMap::new();
    if n == 0 {
        return out;
    }
    for (idx, item) in chart.root_cell().iter().enumerate() {
        out.insert(item.category.canonical().to_string(), count(chart, 0, n, idx, &mut memo));
    }
    out
}

/// A 20-entry lexicon with lexical ambiguity, coordination, modifiers and
/// entries that only combine by composition.
pub const ORACLE_LEXICON: &str = r"texas :- NP : texas:e
oklahoma :- NP : oklahoma:e
austin :- NP : austin:e
kansas :- NP : kansas:e
texas :- N : (lambda $0:e (equals:<e,<e,t>> $0 texas:e))
borders :- (S\NP)/NP : (lambda $0:e (lambda $1:e (border:<e,<e,t>> $1 $0)))
contains :- (S\NP)/NP : (lambda $0:e (lambda $1:e (loc:<e,<e,t>> $0 $1)))
state :- N : (lambda $0:e (state:<e,t> $0))
city :- N : (lambda $0:e (city:<e,t> $0))
major :- N/N : (lambda $0:<e,t> (lambda $1:e (and:<t*,t> (major:<e,t> $1) ($0 $1))))
big :- N/N : (lambda $0:<e,t> (lambda $1:e (and:<t*,t> (big:<e,t> $1) ($0 $1))))
the :- NP/N : (lambda $0:<e,t> (the:<<e,t>,e> $0))
is :- (S\NP)/NP : (lambda $0:e (lambda $1:e (equals:<e,<e,t>> $1 $0)))
is :- (S\NP)/N : (lambda $0:<e,t> (lambda $1:e ($0 $1)))
a :- N/N : (lambda $0:<e,t> $0)
and :- (S\S)/S : (lambda $0:t (lambda $1:t (and:<t*,t> $1 $0)))
not :- (S\NP)/(S\NP) : (lambda $0:<e,t> (lambda $1:e (not:<t,t> ($0 $1))))
sleeps :- S\NP : (lambda $0:e (sleep:<e,t> $0))
indeed :- S\S : (lambda $0:t $0)
quickly :- (S\NP)\(S\NP) : (lambda $0:<e,t> (lambda $1:e (quick:<t,t> ($0 $1))))
";
