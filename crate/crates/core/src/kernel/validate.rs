//! Rule-by-rule re-checking of derivation trees.
//!
//! Nothing here consults the inference code: every node is matched literally
//! against its rule schema, with judgements compared up to α-equivalence and
//! side conditions re-evaluated against the system's axioms and rules.

use std::collections::HashMap;
use std::fmt;

use super::{DerivationTree, Kernel, RuleName, System};
use crate::context::{Context, Declaration};
use crate::reduce::{convertible, Conversion};
use crate::term::{alpha_eq, substitute, Term};

/// A node that does not instantiate its rule. `path` lists premise indices
/// from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: Vec<usize>,
    pub rule: RuleName,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(f, "at [{}] ({}): {}", path.join("."), self.rule, self.message)
    }
}

impl Kernel<'_> {
    /// Checks every node of `tree` against the rules of `system`. Shared
    /// sub-derivations are checked once.
    pub fn validate_derivation(&self, tree: &DerivationTree, system: System) -> Result<(), Vec<Violation>> {
        let mut v = Validator {
            kernel: self,
            system,
            seen: HashMap::new(),
            out: Vec::new(),
        };
        v.node(tree, &mut Vec::new());
        if v.out.is_empty() {
            Ok(())
        } else {
            Err(v.out)
        }
    }
}

struct Validator<'a, 'k> {
    kernel: &'a Kernel<'k>,
    system: System,
    seen: HashMap<*const DerivationTree, ()>,
    out: Vec<Violation>,
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sort_of(ty: &Term, what: &str) -> Result<String, String> {
    ty.as_sort()
        .map(str::to_string)
        .ok_or_else(|| format!("{what} must have a sort as its type, found {ty}"))
}

fn same_ctx(a: &Context, b: &Context, what: &str) -> Check {
    ensure(a.alpha_eq(b), || format!("{what} has context [{a}], expected [{b}]"))
}

/// `ctx = head, x:A` for some `head`; returns `(head, x, A)`.
fn split_last(ctx: &Context) -> Result<(Context, &Declaration), String> {
    match ctx.last() {
        Some(d) => Ok((ctx.prefix(ctx.len() - 1), d)),
        None => Err("the conclusion context must end with a declaration".into()),
    }
}

fn check_tag(subject: &Term, s: &str) -> Check {
    if let Term::Var(v) = subject {
        if let Some(tag) = &v.sort_class {
            return ensure(tag == s, || format!("`{}` is tagged with sort {tag} but its type has sort {s}", v.name));
        }
    }
    Ok(())
}

impl Validator<'_, '_> {
    fn node(&mut self, tree: &DerivationTree, path: &mut Vec<usize>) {
        if let Err(message) = self.check(tree) {
            self.out.push(Violation {
                path: path.clone(),
                rule: tree.rule,
                message,
            });
        }
        for (i, p) in tree.premises.iter().enumerate() {
            if self.seen.insert(std::sync::Arc::as_ptr(p), ()).is_some() {
                continue;
            }
            path.push(i);
            self.node(p, path);
            path.pop();
        }
    }

    fn check(&self, t: &DerivationTree) -> Check {
        ensure(t.rule.belongs_to(self.system), || {
            format!("rule ({}) is not a rule of {}", t.rule, self.system)
        })?;
        ensure(t.premises.len() == t.rule.arity(), || {
            format!("expected {} premises, found {}", t.rule.arity(), t.premises.len())
        })?;
        let spec = self.kernel.spec();
        let c = &t.conclusion;
        let p = |i: usize| &t.premises[i].conclusion;
        match t.rule {
            RuleName::Sort | RuleName::SortPrime => {
                if t.rule == RuleName::Sort {
                    ensure(c.ctx.is_empty(), || "(sort) concludes over the empty context".into())?;
                }
                let s1 = c.subject.as_sort().ok_or("the subject must be a sort")?;
                let s2 = c.ty.as_sort().ok_or("the type must be a sort")?;
                ensure(spec.has_axiom(s1, s2), || format!("({s1}, {s2}) is not an axiom"))?;
                self.side_axiom(t, s1, s2)
            }
            RuleName::Start => {
                let (head, d) = split_last(&c.ctx)?;
                let Term::Var(x) = &c.subject else {
                    return Err("the subject must be a variable".into());
                };
                ensure(x.name == d.var, || format!("the subject `{}` is not the last declared variable `{}`", x.name, d.var))?;
                ensure(alpha_eq(&c.ty, &d.ty), || format!("the type {} differs from the declared {}", c.ty, d.ty))?;
                same_ctx(&p(0).ctx, &head, "the premise")?;
                ensure(alpha_eq(&p(0).subject, &d.ty), || "the premise must type the declared type".into())?;
                let s = sort_of(&p(0).ty, "the declared type")?;
                check_tag(&c.subject, &s)?;
                self.side_sort(t, &s)
            }
            RuleName::Weak => {
                let (head, d) = split_last(&c.ctx)?;
                same_ctx(&p(0).ctx, &head, "the first premise")?;
                same_ctx(&p(1).ctx, &head, "the second premise")?;
                ensure(alpha_eq(&p(0).subject, &c.subject) && alpha_eq(&p(0).ty, &c.ty), || {
                    "the first premise must conclude the same typing".into()
                })?;
                ensure(alpha_eq(&p(1).subject, &d.ty), || "the second premise must type the new declaration".into())?;
                let s = sort_of(&p(1).ty, "the new declaration")?;
                self.side_sort(t, &s)
            }
            RuleName::VarPrime => {
                let Term::Var(x) = &c.subject else {
                    return Err("the subject must be a variable".into());
                };
                let declared = c.ctx.lookup(&x.name).ok_or_else(|| format!("`{}` is not declared", x.name))?;
                ensure(alpha_eq(&c.ty, declared), || format!("the type {} differs from the declared {declared}", c.ty))?;
                same_ctx(&p(0).ctx, &c.ctx, "the premise")?;
                ensure(alpha_eq(&p(0).subject, declared), || "the premise must type the declared type".into())?;
                let s = sort_of(&p(0).ty, "the declared type")?;
                check_tag(&c.subject, &s)?;
                self.side_sort(t, &s)
            }
            RuleName::Prod => {
                same_ctx(&p(0).ctx, &c.ctx, "the first premise")?;
                let (inner, d) = split_last(&p(1).ctx)?;
                same_ctx(&inner, &c.ctx, "the second premise without its last declaration")?;
                ensure(alpha_eq(&d.ty, &p(0).subject), || "the bound variable must be declared with the domain".into())?;
                let rebuilt = Term::prod(&d.var, p(0).subject.clone(), p(1).subject.clone());
                ensure(alpha_eq(&rebuilt, &c.subject), || format!("premises build {rebuilt}, not {}", c.subject))?;
                let s1 = sort_of(&p(0).ty, "the domain")?;
                let s2 = sort_of(&p(1).ty, "the codomain")?;
                let s3 = c.ty.as_sort().ok_or("the type must be a sort")?;
                ensure(spec.has_rule(&s1, &s2, s3), || format!("({s1}, {s2}, {s3}) is not a rule"))?;
                self.side_rule(t, &s1, &s2, Some(s3))
            }
            RuleName::Abs => {
                same_ctx(&p(0).ctx, &c.ctx, "the first premise")?;
                let (inner, d) = split_last(&p(1).ctx)?;
                same_ctx(&inner, &c.ctx, "the second premise without its last declaration")?;
                same_ctx(&p(2).ctx, &p(1).ctx, "the third premise")?;
                ensure(alpha_eq(&d.ty, &p(0).subject), || "the bound variable must be declared with the domain".into())?;
                ensure(alpha_eq(&p(2).ty, &p(1).subject), || "the body must have the type sorted by the second premise".into())?;
                let lam = Term::abs(&d.var, p(0).subject.clone(), p(2).subject.clone());
                ensure(alpha_eq(&lam, &c.subject), || format!("premises build {lam}, not {}", c.subject))?;
                let pi = Term::prod(&d.var, p(0).subject.clone(), p(1).subject.clone());
                ensure(alpha_eq(&pi, &c.ty), || format!("premises build the type {pi}, not {}", c.ty))?;
                let s1 = sort_of(&p(0).ty, "the domain")?;
                let s2 = sort_of(&p(1).ty, "the body type")?;
                let s3 = spec
                    .rule_sort(&s1, &s2)
                    .ok()
                    .flatten()
                    .ok_or_else(|| format!("no rule for ({s1}, {s2})"))?;
                self.side_rule(t, &s1, &s2, Some(s3))
            }
            RuleName::App => {
                same_ctx(&p(0).ctx, &c.ctx, "the first premise")?;
                same_ctx(&p(1).ctx, &c.ctx, "the second premise")?;
                let Term::Prod(x, a, b) = &p(0).ty else {
                    return Err(format!("the function type {} is not a product", p(0).ty));
                };
                ensure(alpha_eq(&p(1).ty, a), || format!("the argument has type {}, not {a}", p(1).ty))?;
                let app = Term::app(p(0).subject.clone(), p(1).subject.clone());
                ensure(alpha_eq(&app, &c.subject), || format!("premises build {app}, not {}", c.subject))?;
                let ty = substitute(b, x, &p(1).subject);
                ensure(alpha_eq(&ty, &c.ty), || format!("the result type should be {ty}, not {}", c.ty))
            }
            RuleName::Conv => {
                same_ctx(&p(0).ctx, &c.ctx, "the first premise")?;
                same_ctx(&p(1).ctx, &c.ctx, "the second premise")?;
                ensure(alpha_eq(&p(0).subject, &c.subject), || "the first premise must type the same subject".into())?;
                ensure(alpha_eq(&p(1).subject, &c.ty), || "the second premise must type the target type".into())?;
                let s = sort_of(&p(1).ty, "the target type")?;
                match convertible(&p(0).ty, &c.ty, self.kernel.fuel()) {
                    Conversion::Yes => {}
                    Conversion::No => return Err(format!("{} and {} are not convertible", p(0).ty, c.ty)),
                    Conversion::Undecided => {
                        return Err(format!("could not confirm {} ≡ {} within the fuel budget", p(0).ty, c.ty))
                    }
                }
                if let Some((a, b)) = &t.side.conversion {
                    ensure(alpha_eq(a, &p(0).ty) && alpha_eq(b, &c.ty), || {
                        "the recorded conversion pair does not match the premises".into()
                    })?;
                }
                self.side_sort(t, &s)
            }
        }
    }

    fn side_axiom(&self, t: &DerivationTree, s1: &str, s2: &str) -> Check {
        match &t.side.axiom {
            Some((a, b)) => ensure(a == s1 && b == s2, || format!("the recorded axiom ({a}, {b}) is not the one used")),
            None => Ok(()),
        }
    }

    fn side_sort(&self, t: &DerivationTree, s: &str) -> Check {
        match &t.side.sort {
            Some(r) => ensure(r == s, || format!("the recorded sort {r} is not {s}")),
            None => Ok(()),
        }
    }

    fn side_rule(&self, t: &DerivationTree, s1: &str, s2: &str, s3: Option<&str>) -> Check {
        match &t.side.rule {
            Some((a, b, c)) => ensure(a == s1 && b == s2 && Some(c.as_str()) == s3, || {
                format!("the recorded rule ({a}, {b}, {c}) is not the one used")
            }),
            None => Ok(()),
        }
    }
}
