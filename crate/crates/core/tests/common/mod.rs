//! Seeded generators shared by the integration tests.
//!
//! Well-typed judgements are built by sampling T rules over a context that is
//! grown one well-formed declaration at a time, so the generator never asks
//! the kernel whether its output is typable.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use pts_core::reduce::{convertible, whnf, Conversion, Fuel};
use pts_core::term::{alpha_eq, fresh_name, substitute, Term, Var};
use pts_core::{Context, Declaration};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const STAR: &str = "*";
pub const BOX: &str = "BOX";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn star() -> Term {
    Term::sort(STAR)
}

fn axiom(s: &str) -> Option<String> {
    (s == STAR).then(|| BOX.to_string())
}

/// A well-formed context together with the sort of each declared type.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub ctx: Context,
    sorts: HashMap<String, String>,
}

impl Scope {
    pub fn extend(&self, x: &str, ty: Term, sort: &str) -> Scope {
        let mut out = self.clone();
        out.ctx.push(x, ty).expect("fresh binder");
        out.sorts.insert(x.to_string(), sort.to_string());
        out
    }

    fn vars_with(&self, pred: impl Fn(&Declaration) -> bool) -> Vec<Declaration> {
        self.ctx.iter().filter(|d| pred(d)).cloned().collect()
    }
}

/// `term : ty`, where `ty : ty_sort` unless `ty` is the top sort.
#[derive(Clone, Debug)]
pub struct Judg {
    pub term: Term,
    pub ty: Term,
    pub ty_sort: Option<String>,
}

const BINDERS: [&str; 6] = ["x", "y", "z", "X", "Y", "f"];

pub struct Gen {
    pub rng: ChaCha8Rng,
    fuel: Fuel,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: rng(seed),
            fuel: Fuel::default(),
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn rng_range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    fn binder(&mut self, scope: &Scope) -> String {
        let taken = scope.ctx.domain();
        let base = *BINDERS.choose(&mut self.rng).unwrap();
        fresh_name(base, &taken)
    }

    fn pick_sort(&mut self) -> &'static str {
        if self.rng.gen_bool(0.7) {
            STAR
        } else {
            BOX
        }
    }

    /// A well-formed context of `n` declarations mixing base types, type
    /// families, type operators, polymorphic constants and inhabitants.
    pub fn context(&mut self, n: usize) -> Scope {
        let mut scope = Scope::default();
        for i in 0..n {
            let types = scope.vars_with(|d| alpha_eq(&d.ty, &star()));
            let choice = if types.is_empty() { 0 } else { self.rng.gen_range(0..6) };
            scope = match choice {
                0 => scope.extend(&format!("T{i}"), star(), BOX),
                1 => {
                    let t = types.choose(&mut self.rng).unwrap();
                    let fam = Term::prod("x", Term::var(&t.var), star());
                    scope.extend(&format!("F{i}"), fam, BOX)
                }
                2 => scope.extend(&format!("G{i}"), Term::arrow(star(), star()), BOX),
                3 => {
                    let poly = Term::prod("X", star(), Term::arrow(Term::var("X"), Term::var("X")));
                    scope.extend(&format!("p{i}"), poly, STAR)
                }
                _ => match self.of_sort(&scope, STAR, 2) {
                    Some(mut ty) => {
                        if self.rng.gen_bool(0.25) {
                            // a type that is only convertible to a normal one
                            ty = Term::app(Term::abs("X", star(), Term::var("X")), ty);
                        }
                        scope.extend(&format!("c{i}"), ty, STAR)
                    }
                    None => scope.extend(&format!("T{i}"), star(), BOX),
                },
            };
        }
        scope
    }

    /// A term whose type is the sort `s`.
    pub fn of_sort(&mut self, scope: &Scope, s: &str, budget: u32) -> Option<Term> {
        for _ in 0..12 {
            if let Some(j) = self.judg(scope, budget) {
                if j.ty.as_sort() == Some(s) {
                    if s == STAR && self.rng.gen_bool(0.15) {
                        // a type reached only through a redex
                        return Some(Term::app(Term::abs("Y", star(), Term::var("Y")), j.term));
                    }
                    return Some(j.term);
                }
            }
        }
        let vars = scope.vars_with(|d| d.ty.as_sort() == Some(s));
        if let Some(d) = vars.choose(&mut self.rng) {
            return Some(Term::var(&d.var));
        }
        (s == BOX).then(star)
    }

    /// A term convertible-typed to `c`.
    fn of_type(&mut self, scope: &Scope, c: &Term, budget: u32) -> Option<Term> {
        if let Some(s) = c.as_sort() {
            return self.of_sort(scope, s, budget);
        }
        let fuel = self.fuel;
        let matching = scope.vars_with(|d| alpha_eq(&d.ty, c) || convertible(&d.ty, c, fuel) == Conversion::Yes);
        if !matching.is_empty() && self.rng.gen_bool(0.6) {
            return Some(Term::var(&matching.choose(&mut self.rng).unwrap().var));
        }
        for _ in 0..8 {
            if let Some(j) = self.judg(scope, budget) {
                if alpha_eq(&j.ty, c) || convertible(&j.ty, c, fuel) == Conversion::Yes {
                    return Some(j.term);
                }
            }
        }
        matching.choose(&mut self.rng).map(|d| Term::var(&d.var))
    }

    /// One sampled derivation, or `None` when the sample got stuck.
    pub fn judg(&mut self, scope: &Scope, budget: u32) -> Option<Judg> {
        let rule = if budget == 0 {
            self.rng.gen_range(0..2)
        } else {
            *[0, 1, 1, 2, 2, 3, 3, 3, 4, 4, 4, 4, 4].choose(&mut self.rng).unwrap()
        };
        match rule {
            0 => Some(Judg {
                term: star(),
                ty: Term::sort(BOX),
                ty_sort: None,
            }),
            1 => {
                let d = scope.ctx.decls().choose(&mut self.rng)?;
                Some(Judg {
                    term: Term::var(&d.var),
                    ty: d.ty.clone(),
                    ty_sort: scope.sorts.get(&d.var).cloned(),
                })
            }
            2 => {
                let s1 = self.pick_sort();
                let a = self.of_sort(scope, s1, budget - 1)?;
                let x = self.binder(scope);
                let inner = scope.extend(&x, a.clone(), s1);
                let s2 = self.pick_sort();
                let b = self.of_sort(&inner, s2, budget - 1)?;
                Some(Judg {
                    term: Term::prod(x, a, b),
                    ty: Term::sort(s2),
                    ty_sort: axiom(s2),
                })
            }
            3 => {
                let s1 = self.pick_sort();
                let a = self.of_sort(scope, s1, budget - 1)?;
                let x = self.binder(scope);
                let inner = scope.extend(&x, a.clone(), s1);
                let body = self.judg(&inner, budget - 1)?;
                let s2 = body.ty_sort?;
                Some(Judg {
                    term: Term::abs(&x, a.clone(), body.term),
                    ty: Term::prod(x, a, body.ty),
                    ty_sort: Some(s2),
                })
            }
            _ => {
                let f = self.judg(scope, budget - 1)?;
                let prod = match &f.ty {
                    Term::Prod(..) => f.ty.clone(),
                    other => whnf(other, self.fuel).ok()?,
                };
                let Term::Prod(x, c, d) = prod else {
                    return None;
                };
                let u = self.of_type(scope, &c, budget - 1)?;
                Some(Judg {
                    term: Term::app(f.term, u.clone()),
                    ty: substitute(&d, &x, &u),
                    ty_sort: f.ty_sort,
                })
            }
        }
    }

    /// A judgement over `scope` whose subject has at most `max_size` nodes,
    /// biased towards larger subjects.
    pub fn judgement(&mut self, scope: &Scope, max_size: usize) -> Judg {
        let mut least = self.rng.gen_range(1..=max_size.max(2) / 2);
        loop {
            for _ in 0..40 {
                let budget = self.rng.gen_range(2..=6);
                if let Some(j) = self.judg(scope, budget) {
                    if (least..=max_size).contains(&j.term.size()) {
                        return j;
                    }
                }
            }
            least = (least / 2).max(1);
        }
    }

    /// Declarations nothing well-typed can rely on: ill-typed types, unbound
    /// names, self reference, and names that clash with common binders.
    pub fn junk(&mut self, scope: &Scope, count: usize) -> Vec<Declaration> {
        let mut taken = scope.ctx.domain();
        let mut out = Vec::new();
        for k in 0..count {
            let base = *["x", "y", "X", "q", "junk"].choose(&mut self.rng).unwrap();
            let name = fresh_name(base, &taken);
            taken.insert(name.clone());
            let ty = match self.rng.gen_range(0..6) {
                0 => Term::app(star(), star()),
                1 => Term::sort(BOX),
                2 => Term::var(format!("undeclared{k}")),
                3 => Term::var(&name),
                4 => Term::var(*BINDERS.choose(&mut self.rng).unwrap()),
                _ => Term::app(Term::var(&name), Term::var("x")),
            };
            out.push(Declaration::new(name, ty));
        }
        out
    }

    /// `scope` plus `junk`, in random order.
    pub fn shuffled(&mut self, ctx: &Context, junk: &[Declaration]) -> Context {
        let mut decls: Vec<Declaration> = ctx.iter().cloned().chain(junk.iter().cloned()).collect();
        decls.shuffle(&mut self.rng);
        Context::from_decls(decls).expect("distinct names")
    }

    /// Random subset of `scope` closed under dependencies, in scope order:
    /// well-formed because every dropped declaration is unused by the rest.
    pub fn closed_subset(&mut self, ctx: &Context) -> Context {
        let mut keep: BTreeSet<String> = ctx
            .iter()
            .filter(|_| self.rng.gen_bool(0.5))
            .map(|d| d.var.clone())
            .collect();
        for d in ctx.iter().rev() {
            if keep.contains(&d.var) {
                keep.extend(d.ty.free_vars());
            }
        }
        Context::from_decls(ctx.iter().filter(|d| keep.contains(&d.var)).cloned()).unwrap()
    }

    /// Syntactically arbitrary term (not necessarily typable).
    pub fn raw_term(&mut self, depth: u32) -> Term {
        let names = ["a", "b", "x", "y", "x'", "_", "_'", "nat", "f"];
        let leaf = |g: &mut Gen| -> Term {
            match g.rng.gen_range(0..10) {
                0 => Term::sort(STAR),
                1 => Term::sort(BOX),
                2 => Term::Var(Var::tagged(*names.choose(&mut g.rng).unwrap(), STAR)),
                _ => Term::var(*names.choose(&mut g.rng).unwrap()),
            }
        };
        if depth == 0 {
            return leaf(self);
        }
        match self.rng.gen_range(0..5) {
            0 => leaf(self),
            1 => {
                let x = *names.choose(&mut self.rng).unwrap();
                Term::prod(x, self.raw_term(depth - 1), self.raw_term(depth - 1))
            }
            2 => {
                let x = *names.choose(&mut self.rng).unwrap();
                Term::abs(x, self.raw_term(depth - 1), self.raw_term(depth - 1))
            }
            _ => Term::app(self.raw_term(depth - 1), self.raw_term(depth - 1)),
        }
    }
}
