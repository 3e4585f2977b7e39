//! Named term syntax: variables, sorts, dependent products, abstractions and
//! applications, together with free variables, α-equivalence and
//! capture-avoiding substitution.

use std::collections::BTreeSet;

/// A variable occurrence.
///
/// `sort_class` records the sort `s` of the variable family `V_s` the
/// variable is drawn from, when the user wrote one (`x@*`). It never takes part
/// in α-equivalence or substitution matching.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub sort_class: Option<String>,
}

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            sort_class: None,
        }
    }

    pub fn tagged(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Var {
            name: name.into(),
            sort_class: Some(sort.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Sort(String),
    /// `(x : A) -> B`
    Prod(String, Box<Term>, Box<Term>),
    /// `\x : A. t`
    Abs(String, Box<Term>, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn sort(s: impl Into<String>) -> Term {
        Term::Sort(s.into())
    }

    pub fn prod(x: impl Into<String>, domain: Term, codomain: Term) -> Term {
        Term::Prod(x.into(), Box::new(domain), Box::new(codomain))
    }

    /// Non-dependent product `A -> B`, using the reserved binder `_`.
    pub fn arrow(domain: Term, codomain: Term) -> Term {
        Term::prod("_", domain, codomain)
    }

    pub fn abs(x: impl Into<String>, domain: Term, body: Term) -> Term {
        Term::Abs(x.into(), Box::new(domain), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Left-nested application `f a1 a2 ... an`.
    pub fn apps(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(fun, Term::app)
    }

    pub fn as_sort(&self) -> Option<&str> {
        match self {
            Term::Sort(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_sort(&self) -> bool {
        matches!(self, Term::Sort(_))
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Sort(_) => 1,
            Term::Prod(_, a, b) | Term::Abs(_, a, b) | Term::App(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self {
            Term::Var(v) => v.name == x,
            Term::Sort(_) => false,
            Term::Prod(y, a, b) | Term::Abs(y, a, b) => a.occurs_free(x) || (y != x && b.occurs_free(x)),
            Term::App(f, a) => f.occurs_free(x) || a.occurs_free(x),
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha_eq(self, other)
    }

    pub fn substitute(&self, x: &str, u: &Term) -> Term {
        substitute(self, x, u)
    }
}

fn collect_free<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(v) => {
            if !bound.contains(&v.name.as_str()) {
                out.insert(v.name.clone());
            }
        }
        Term::Sort(_) => {}
        Term::Prod(x, a, b) | Term::Abs(x, a, b) => {
            collect_free(a, bound, out);
            bound.push(x);
            collect_free(b, bound, out);
            bound.pop();
        }
        Term::App(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
    }
}

pub fn free_vars(t: &Term) -> BTreeSet<String> {
    t.free_vars()
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    fn go<'a>(t: &'a Term, u: &'a Term, env: &mut Vec<(&'a str, &'a str)>) -> bool {
        match (t, u) {
            (Term::Var(x), Term::Var(y)) => {
                for &(l, r) in env.iter().rev() {
                    if l == x.name || r == y.name {
                        return l == x.name && r == y.name;
                    }
                }
                x.name == y.name
            }
            (Term::Sort(a), Term::Sort(b)) => a == b,
            (Term::Prod(x, a1, b1), Term::Prod(y, a2, b2))
            | (Term::Abs(x, a1, b1), Term::Abs(y, a2, b2)) => {
                if !go(a1, a2, env) {
                    return false;
                }
                env.push((x, y));
                let same = go(b1, b2, env);
                env.pop();
                same
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => go(f1, f2, env) && go(a1, a2, env),
            _ => false,
        }
    }
    go(t, u, &mut Vec::new())
}

/// First of `base`, `base'`, `base''`, ... that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut candidate = base.to_string();
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Capture-avoiding `(u/x)t`.
pub fn substitute(t: &Term, x: &str, u: &Term) -> Term {
    let fv_u = u.free_vars();
    subst_with(t, x, &fv_u, &|_| u.clone())
}

/// Renames the free occurrences of `x` in `t` to `y`, keeping sort tags.
pub fn rename_free(t: &Term, x: &str, y: &str) -> Term {
    if x == y {
        return t.clone();
    }
    let fv = BTreeSet::from([y.to_string()]);
    subst_with(t, x, &fv, &|v| {
        Term::Var(Var {
            name: y.to_string(),
            sort_class: v.sort_class.clone(),
        })
    })
}

// `replacement` maps an occurrence of `x` to the term replacing it; every such
// term has free variables contained in `repl_fv`.
fn subst_with(
    t: &Term,
    x: &str,
    repl_fv: &BTreeSet<String>,
    replacement: &dyn Fn(&Var) -> Term,
) -> Term {
    match t {
        Term::Var(v) if v.name == x => replacement(v),
        Term::Var(_) | Term::Sort(_) => t.clone(),
        Term::App(f, a) => Term::app(
            subst_with(f, x, repl_fv, replacement),
            subst_with(a, x, repl_fv, replacement),
        ),
        Term::Prod(y, a, b) | Term::Abs(y, a, b) => {
            let domain = subst_with(a, x, repl_fv, replacement);
            let (binder, body) = if y == x || !b.occurs_free(x) {
                (y.clone(), (**b).clone())
            } else if repl_fv.contains(y) {
                let mut avoid = repl_fv.clone();
                avoid.extend(b.free_vars());
                avoid.insert(x.to_string());
                let fresh = fresh_name(y, &avoid);
                let renamed = rename_free(b, y, &fresh);
                (fresh, subst_with(&renamed, x, repl_fv, replacement))
            } else {
                (y.clone(), subst_with(b, x, repl_fv, replacement))
            };
            match t {
                Term::Prod(..) => Term::prod(binder, domain, body),
                _ => Term::abs(binder, domain, body),
            }
        }
    }
}
