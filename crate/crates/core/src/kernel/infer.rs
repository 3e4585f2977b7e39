//! Syntax-directed inference for T'.
//!
//! Every case emits the matching rule node. Uses of (conv) are explicit: they
//! appear where an inferred type must be exposed as a sort or a product by
//! weak-head reduction, and where an argument type is only convertible (not
//! α-equivalent) to the expected domain.
//!
//! The (var') premise types the declared type in the *whole* context, so
//! inference can recurse through the context. An active set of variables
//! whose types are being inferred turns the infinite descent on cyclic
//! contexts such as `x : y, y : x` into `CyclicContextDependency`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{DerivationTree, Judgement, Kernel, Location, RuleName, Side, Step, TypeError, TypeErrorKind};
use crate::context::Context;
use crate::reduce::{convertible, whnf, Conversion};
use crate::term::{alpha_eq, fresh_name, rename_free, substitute, Term, Var};

#[derive(Clone)]
struct Typed {
    ty: Term,
    deriv: Arc<DerivationTree>,
}

/// Where errors are reported. A pinned position belongs to a synthesized
/// term (an inferred type), so descending into it does not extend the path.
#[derive(Clone)]
struct At {
    loc: Location,
    pinned: bool,
}

impl At {
    fn new(loc: Location) -> Self {
        At { loc, pinned: false }
    }

    fn child(&self, step: Step) -> At {
        if self.pinned {
            self.clone()
        } else {
            At::new(self.loc.child(step))
        }
    }

    fn pinned(&self) -> At {
        At {
            loc: self.loc.clone(),
            pinned: true,
        }
    }

    fn error(&self, kind: TypeErrorKind, detail: impl Into<String>) -> TypeError {
        TypeError::new(kind, self.loc.clone(), detail)
    }
}

fn node(rule: RuleName, ctx: &Context, subject: Term, ty: Term, side: Side, premises: Vec<Arc<DerivationTree>>) -> Arc<DerivationTree> {
    Arc::new(DerivationTree::new(rule, Judgement::new(ctx.clone(), subject, ty), side, premises))
}

/// Picks a binder name that does not occur in `ctx` and renames `body`
/// accordingly.
fn freshen(ctx: &Context, x: &str, body: &Term) -> (String, Term) {
    if !ctx.mentions(x) {
        return (x.to_string(), body.clone());
    }
    let mut avoid: BTreeSet<String> = ctx.names();
    avoid.extend(body.free_vars());
    let y = fresh_name(x, &avoid);
    let renamed = rename_free(body, x, &y);
    (y, renamed)
}

/// `(y : A) -> B`, shown with the user's binder `x` when that is safe.
fn display_prod(x: &str, y: &str, a: &Term, b: Term) -> Term {
    if x == y {
        Term::prod(y, a.clone(), b)
    } else if !b.occurs_free(x) {
        Term::prod(x, a.clone(), rename_free(&b, y, x))
    } else {
        Term::prod(y, a.clone(), b)
    }
}

struct Inference<'k, 's> {
    kernel: &'k Kernel<'s>,
    active: BTreeSet<String>,
    vars: HashMap<(Context, Var), Typed>,
}

impl<'k, 's> Inference<'k, 's> {
    fn new(kernel: &'k Kernel<'s>) -> Self {
        Inference {
            kernel,
            active: BTreeSet::new(),
            vars: HashMap::new(),
        }
    }

    fn infer(&mut self, ctx: &Context, t: &Term, at: &At) -> Result<Typed, TypeError> {
        match t {
            Term::Sort(s) => self.sort(ctx, s, at),
            Term::Var(v) => self.var(ctx, v, at),
            Term::Prod(x, a, b) => {
                let (s1, da) = self.sorted(ctx, a, &at.child(Step::Domain))?;
                let (y, body) = freshen(ctx, x, b);
                let inner = ctx.extend(&y, (**a).clone()).map_err(|e| TypeError::internal(e.to_string()))?;
                let (s2, db) = self.sorted(&inner, &body, &at.child(Step::Body))?;
                let s3 = self.rule(&s1, &s2, at)?;
                let side = Side {
                    rule: Some((s1, s2, s3.clone())),
                    ..Side::default()
                };
                let ty = Term::Sort(s3);
                Ok(Typed {
                    deriv: node(RuleName::Prod, ctx, t.clone(), ty.clone(), side, vec![da, db]),
                    ty,
                })
            }
            Term::Abs(x, a, b) => {
                let (s1, da) = self.sorted(ctx, a, &at.child(Step::Domain))?;
                let (y, body) = freshen(ctx, x, b);
                let inner = ctx.extend(&y, (**a).clone()).map_err(|e| TypeError::internal(e.to_string()))?;
                let tb = self.infer(&inner, &body, &at.child(Step::Body))?;
                let (s2, dtb) = self.sorted(&inner, &tb.ty, &at.child(Step::Body).pinned())?;
                let s3 = self.rule(&s1, &s2, at)?;
                let side = Side {
                    rule: Some((s1, s2, s3)),
                    ..Side::default()
                };
                let ty = display_prod(x, &y, a, tb.ty);
                Ok(Typed {
                    deriv: node(RuleName::Abs, ctx, t.clone(), ty.clone(), side, vec![da, dtb, tb.deriv]),
                    ty,
                })
            }
            Term::App(f, u) => {
                let fun_at = at.child(Step::Fun);
                let tf = self.infer(ctx, f, &fun_at)?;
                let (prod, df) = self.expose_product(ctx, tf, &fun_at)?;
                let Term::Prod(x, c, d) = &prod else {
                    unreachable!("expose_product returns a product");
                };
                let arg_at = at.child(Step::Arg);
                let tu = self.infer(ctx, u, &arg_at)?;
                let du = self.coerce(ctx, tu, c, &arg_at)?;
                let ty = substitute(d, x, u);
                Ok(Typed {
                    deriv: node(RuleName::App, ctx, t.clone(), ty.clone(), Side::default(), vec![df, du]),
                    ty,
                })
            }
        }
    }

    fn sort(&mut self, ctx: &Context, s1: &str, at: &At) -> Result<Typed, TypeError> {
        let spec = self.kernel.spec();
        let s2 = match spec.axiom_sort(s1) {
            Ok(Some(s2)) => s2.to_string(),
            Ok(None) => return Err(at.error(TypeErrorKind::NoAxiom, format!("sort {s1} has no type"))),
            Err(e) => return Err(at.error(TypeErrorKind::NoAxiom, e.to_string())),
        };
        let side = Side {
            axiom: Some((s1.to_string(), s2.clone())),
            ..Side::default()
        };
        let ty = Term::Sort(s2);
        Ok(Typed {
            deriv: node(RuleName::SortPrime, ctx, Term::sort(s1), ty.clone(), side, Vec::new()),
            ty,
        })
    }

    fn var(&mut self, ctx: &Context, v: &Var, at: &At) -> Result<Typed, TypeError> {
        let Some(declared) = ctx.lookup(&v.name) else {
            return Err(at.error(TypeErrorKind::UnboundVariable, format!("`{}` is not declared", v.name)));
        };
        let key = (ctx.clone(), v.clone());
        if let Some(done) = self.vars.get(&key) {
            return Ok(done.clone());
        }
        if !self.active.insert(v.name.clone()) {
            return Err(at.error(
                TypeErrorKind::CyclicContextDependency,
                format!("typing the declared type of `{}` requires `{}` itself", v.name, v.name),
            ));
        }
        let sorted = self.sorted(ctx, declared, &At::new(Location::declaration(&v.name)));
        self.active.remove(&v.name);
        let (s, da) = sorted?;
        if let Some(tag) = &v.sort_class {
            if *tag != s {
                return Err(at.error(
                    TypeErrorKind::Mismatch,
                    format!("`{}` is tagged as a variable of sort {tag}, but its type has sort {s}", v.name),
                ));
            }
        }
        let side = Side {
            sort: Some(s),
            ..Side::default()
        };
        let typed = Typed {
            ty: declared.clone(),
            deriv: node(RuleName::VarPrime, ctx, Term::Var(v.clone()), declared.clone(), side, vec![da]),
        };
        self.vars.insert(key, typed.clone());
        Ok(typed)
    }

    fn rule(&self, s1: &str, s2: &str, at: &At) -> Result<String, TypeError> {
        match self.kernel.spec().rule_sort(s1, s2) {
            Ok(Some(s3)) => Ok(s3.to_string()),
            Ok(None) => Err(at.error(TypeErrorKind::NoRule, format!("no rule for ({s1}, {s2})"))),
            Err(e) => Err(at.error(TypeErrorKind::NoRule, e.to_string())),
        }
    }

    /// Infers the type of `t` and exposes it as a sort.
    fn sorted(&mut self, ctx: &Context, t: &Term, at: &At) -> Result<(String, Arc<DerivationTree>), TypeError> {
        let typed = self.infer(ctx, t, at)?;
        self.expose_sort(ctx, typed, at)
    }

    fn expose_sort(&mut self, ctx: &Context, typed: Typed, at: &At) -> Result<(String, Arc<DerivationTree>), TypeError> {
        if let Term::Sort(s) = &typed.ty {
            return Ok((s.clone(), typed.deriv));
        }
        let head = whnf(&typed.ty, self.kernel.fuel()).map_err(|e| {
            at.error(
                TypeErrorKind::ConversionUndecided,
                format!("reducing {} to weak-head normal form: {e}", typed.ty),
            )
        })?;
        let Term::Sort(s) = &head else {
            return Err(at.error(
                TypeErrorKind::NotASort,
                format!("{} has type {}, which is not a sort", typed.deriv.conclusion.subject, typed.ty),
            ));
        };
        let target = self.sort(ctx, s, at).map_err(|_| {
            at.error(
                TypeErrorKind::NotASort,
                format!("{} reduces to the sort {s}, which has no type", typed.ty),
            )
        })?;
        let s = s.clone();
        Ok((s, conv(ctx, typed, head, target.deriv)))
    }

    fn expose_product(&mut self, ctx: &Context, typed: Typed, at: &At) -> Result<(Term, Arc<DerivationTree>), TypeError> {
        if matches!(typed.ty, Term::Prod(..)) {
            return Ok((typed.ty, typed.deriv));
        }
        let head = whnf(&typed.ty, self.kernel.fuel()).map_err(|e| {
            at.error(
                TypeErrorKind::ConversionUndecided,
                format!("reducing {} to weak-head normal form: {e}", typed.ty),
            )
        })?;
        if !matches!(head, Term::Prod(..)) {
            return Err(at.error(
                TypeErrorKind::NotAProduct,
                format!("{} has type {}, which is not a product", typed.deriv.conclusion.subject, typed.ty),
            ));
        }
        let (_, dhead) = self.sorted(ctx, &head, &at.pinned())?;
        let deriv = conv(ctx, typed, head.clone(), dhead);
        Ok((head, deriv))
    }

    /// A derivation of `Γ ⊢ subject : expected` from `typed`.
    fn coerce(&mut self, ctx: &Context, typed: Typed, expected: &Term, at: &At) -> Result<Arc<DerivationTree>, TypeError> {
        if alpha_eq(&typed.ty, expected) {
            return Ok(typed.deriv);
        }
        match convertible(&typed.ty, expected, self.kernel.fuel()) {
            Conversion::Yes => {
                let (_, dexp) = self.sorted(ctx, expected, &at.pinned())?;
                Ok(conv(ctx, typed, expected.clone(), dexp))
            }
            Conversion::No => Err(at.error(
                TypeErrorKind::Mismatch,
                format!(
                    "{} has type {}, expected {}",
                    typed.deriv.conclusion.subject, typed.ty, expected
                ),
            )),
            Conversion::Undecided => Err(at.error(
                TypeErrorKind::ConversionUndecided,
                format!(
                    "could not decide whether {} and {} are convertible within the fuel budget",
                    typed.ty, expected
                ),
            )),
        }
    }
}

/// (conv) from `typed` to `target`; `target_deriv` types `target` with a sort.
fn conv(ctx: &Context, typed: Typed, target: Term, target_deriv: Arc<DerivationTree>) -> Arc<DerivationTree> {
    let subject = typed.deriv.conclusion.subject.clone();
    let side = Side {
        sort: target_deriv.conclusion.ty.as_sort().map(str::to_string),
        conversion: Some((typed.ty, target.clone())),
        ..Side::default()
    };
    node(RuleName::Conv, ctx, subject, target, side, vec![typed.deriv, target_deriv])
}

impl Kernel<'_> {
    /// Infers the type of `t` in the arbitrary context `ctx` (system T').
    pub fn infer_tprime(&self, ctx: &Context, t: &Term) -> Result<(Term, DerivationTree), TypeError> {
        let typed = Inference::new(self).infer(ctx, t, &At::new(Location::subject()))?;
        Ok((typed.ty, (*typed.deriv).clone()))
    }

    /// Checks `ctx ⊢ t : a` in T', ending with (conv) when the inferred type
    /// is convertible but not α-equivalent to `a`.
    pub fn check_tprime(&self, ctx: &Context, t: &Term, a: &Term) -> Result<DerivationTree, TypeError> {
        let mut inference = Inference::new(self);
        let typed = inference.infer(ctx, t, &At::new(Location::subject()))?;
        if alpha_eq(&typed.ty, a) {
            return Ok(typed.deriv.with_type(a.clone()));
        }
        let expected_at = At::new(Location::expected());
        let (_, dexp) = inference.sorted(ctx, a, &expected_at)?;
        match convertible(&typed.ty, a, self.fuel()) {
            Conversion::Yes => Ok((*conv(ctx, typed, a.clone(), dexp)).clone()),
            Conversion::No => Err(expected_at.error(
                TypeErrorKind::Mismatch,
                format!("{t} has type {}, expected {a}", typed.ty),
            )),
            Conversion::Undecided => Err(expected_at.error(
                TypeErrorKind::ConversionUndecided,
                format!(
                    "could not decide whether {} and {a} are convertible within the fuel budget",
                    typed.ty
                ),
            )),
        }
    }

    /// Checks `ctx ⊢ t : a` in T: the context must be well-formed, and the
    /// returned derivation uses the T rules only.
    pub fn check_t(&self, ctx: &Context, t: &Term, a: &Term) -> Result<DerivationTree, TypeError> {
        if let Some(failure) = self.wf_check(ctx).failure {
            return Err(failure.to_type_error());
        }
        let tprime = self.check_tprime(ctx, t, a)?;
        self.elaborate_well_formed(&tprime)
    }

    /// `ctx ⊢ t : s` for some sort `s`, as a T' derivation.
    pub(crate) fn infer_sort(&self, ctx: &Context, t: &Term, loc: Location) -> Result<(String, Arc<DerivationTree>), TypeError> {
        Inference::new(self).sorted(ctx, t, &At::new(loc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::System;
    use crate::spec::builtin;
    use crate::syntax::{parse_context, parse_term};

    fn kind(r: Result<(Term, DerivationTree), TypeError>) -> TypeErrorKind {
        r.unwrap_err().kind
    }

    #[test]
    fn infers_variables_in_any_order() {
        let coc = builtin("coc").unwrap();
        let k = Kernel::new(&coc).unwrap();
        for src in ["nat : *, z : nat", "z : nat, nat : *", "nat : *, x : * *, z : nat"] {
            let (ty, d) = k.infer_tprime(&parse_context(src).unwrap(), &parse_term("z").unwrap()).unwrap();
            assert_eq!(ty, parse_term("nat").unwrap(), "{src}");
            assert_eq!(d.rule, RuleName::VarPrime);
            k.validate_derivation(&d, System::TPrime).unwrap();
        }
    }

    #[test]
    fn sorts_and_failures() {
        let coc = builtin("coc").unwrap();
        let k = Kernel::new(&coc).unwrap();
        let (ty, _) = k.infer_tprime(&Context::new(), &parse_term("*").unwrap()).unwrap();
        assert_eq!(ty, Term::sort("BOX"));
        assert_eq!(kind(k.infer_tprime(&Context::new(), &parse_term("BOX").unwrap())), TypeErrorKind::NoAxiom);
        assert_eq!(kind(k.infer_tprime(&Context::new(), &parse_term("* *").unwrap())), TypeErrorKind::NotAProduct);
        assert_eq!(kind(k.infer_tprime(&Context::new(), &parse_term("q").unwrap())), TypeErrorKind::UnboundVariable);

        let cyc = parse_context("x : y, y : x").unwrap();
        assert_eq!(kind(k.infer_tprime(&cyc, &parse_term("x").unwrap())), TypeErrorKind::CyclicContextDependency);

        let g = parse_context("nat : *, array : nat -> *, z : nat, nil : array z z").unwrap();
        assert_eq!(kind(k.infer_tprime(&g, &parse_term("nil").unwrap())), TypeErrorKind::NotAProduct);
    }

    #[test]
    fn lambda_cube_rules_are_enforced() {
        let poly_id = parse_term("\\A : *. \\x : A. x").unwrap();
        let stlc = builtin("stlc").unwrap();
        let e = Kernel::new(&stlc).unwrap().infer_tprime(&Context::new(), &poly_id).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::NoRule);

        let coc = builtin("coc").unwrap();
        let (ty, _) = Kernel::new(&coc).unwrap().infer_tprime(&Context::new(), &poly_id).unwrap();
        assert!(ty.alpha_eq(&parse_term("(A : *) -> (x : A) -> A").unwrap()));
    }

    #[test]
    fn shadowing_binders_are_renamed() {
        let coc = builtin("coc").unwrap();
        let k = Kernel::new(&coc).unwrap();
        let g = parse_context("x : *, f : x -> x").unwrap();
        // the inner x must not capture the x in f's type
        let t = parse_term("\\x : *. f").unwrap();
        let (ty, d) = k.infer_tprime(&g, &t).unwrap();
        assert!(ty.alpha_eq(&parse_term("(y : *) -> x -> x").unwrap()), "{ty}");
        k.validate_derivation(&d, System::TPrime).unwrap();
    }

    #[test]
    fn conversion_in_argument_position() {
        let coc = builtin("coc").unwrap();
        let k = Kernel::new(&coc).unwrap();
        let g = parse_context("nat : *, f : nat -> nat, z : (\\A : *. A) nat").unwrap();
        let (ty, d) = k.infer_tprime(&g, &parse_term("f z").unwrap()).unwrap();
        assert_eq!(ty, parse_term("nat").unwrap());
        assert!(d.rules_used().contains(&RuleName::Conv));
        k.validate_derivation(&d, System::TPrime).unwrap();
    }

    #[test]
    fn sort_tags() {
        let coc = builtin("coc").unwrap();
        let k = Kernel::new(&coc).unwrap();
        let g = parse_context("nat : *, z : nat").unwrap();
        assert!(k.infer_tprime(&g, &parse_term("nat@BOX").unwrap()).is_ok());
        let e = k.infer_tprime(&g, &parse_term("nat@*").unwrap()).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::Mismatch);
    }

    #[test]
    fn error_locations_follow_the_term() {
        let coc = builtin("coc").unwrap();
        let k = Kernel::new(&coc).unwrap();
        let g = parse_context("nat : *, z : nat").unwrap();
        let e = k.infer_tprime(&g, &parse_term("\\y : nat. z q").unwrap()).unwrap_err();
        assert_eq!(e.location.path, vec![Step::Body, Step::Fun]);
        assert_eq!(e.kind, TypeErrorKind::NotAProduct);

        let g = parse_context("nat : *, bad : nat nat, b : bad").unwrap();
        let e = k.infer_tprime(&g, &parse_term("b").unwrap()).unwrap_err();
        assert_eq!(e.location.origin, crate::kernel::Origin::Declaration("bad".into()));
    }

    #[test]
    fn check_examples() {
        let coc = builtin("coc").unwrap();
        let k = Kernel::new(&coc).unwrap();
        let g = parse_context("nat : *, bool : *, z : nat").unwrap();
        let z = parse_term("z").unwrap();
        assert!(k.check_tprime(&g, &z, &parse_term("nat").unwrap()).is_ok());
        let d = k.check_tprime(&g, &z, &parse_term("(\\A : *. A) nat").unwrap()).unwrap();
        assert_eq!(d.rule, RuleName::Conv);
        k.validate_derivation(&d, System::TPrime).unwrap();
        let e = k.check_tprime(&g, &z, &parse_term("bool").unwrap()).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::Mismatch);
    }
}
