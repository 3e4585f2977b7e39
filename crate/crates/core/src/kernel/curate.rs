//! Extracting a well-formed sub-context from a T' derivation.
//!
//! The walk follows the derivation: (sort') needs nothing, (var') needs what
//! its type needs plus the variable itself, binders drop their own variable
//! from what the body needs, and every other rule merges what its premises
//! need. The judgement is then re-derived over the extracted context and
//! elaborated into T.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::{DerivationTree, Kernel, RuleName, System, TypeError, Violation};
use crate::context::{Context, ContextError};
use crate::term::{Term, alpha_eq};

#[derive(Clone, Debug)]
pub struct CurationResult {
    /// Well-formed and included in the input context.
    pub delta: Context,
    pub ty: Term,
    /// `delta ⊢ t : ty` in T'.
    pub tprime_deriv: DerivationTree,
    /// `delta ⊢ t : ty` in T.
    pub t_deriv: DerivationTree,
}

fn breach(what: &str, e: ContextError) -> TypeError {
    TypeError::internal(format!("curation could not {what}: {e}"))
}

struct Curator<'a, 'k> {
    kernel: &'a Kernel<'k>,
    seen: HashMap<*const DerivationTree, Context>,
}

impl Curator<'_, '_> {
    fn node(&mut self, tree: &DerivationTree) -> Result<Context, TypeError> {
        let c = &tree.conclusion;
        let premise = |i: usize| -> &Arc<DerivationTree> { &tree.premises[i] };
        match tree.rule {
            RuleName::SortPrime => Ok(Context::new()),
            RuleName::VarPrime => {
                let Term::Var(x) = &c.subject else {
                    return Err(TypeError::internal("(var') node without a variable subject"));
                };
                let mut delta = self.shared(premise(0))?;
                if !delta.declares(&x.name) {
                    delta.push(x.name.clone(), c.ty.clone()).map_err(|e| breach("add a variable", e))?;
                }
                Ok(delta)
            }
            RuleName::Prod | RuleName::Abs => {
                let mut delta = self.shared(premise(0))?;
                for p in &tree.premises[1..] {
                    let extended = self.shared(p)?;
                    let d = p.conclusion.ctx.last().ok_or_else(|| TypeError::internal("binder premise over empty context"))?;
                    let reordered = self
                        .kernel
                        .reorder(&extended, &d.var, &d.ty)
                        .map_err(|e| breach("move a bound variable last", e))?;
                    delta = self.kernel.merge(&delta, &reordered).map_err(|e| breach("merge", e))?;
                }
                Ok(delta)
            }
            RuleName::App | RuleName::Conv => {
                let d1 = self.shared(premise(0))?;
                let d2 = self.shared(premise(1))?;
                self.kernel.merge(&d1, &d2).map_err(|e| breach("merge", e))
            }
            RuleName::Sort | RuleName::Start | RuleName::Weak => {
                Err(TypeError::internal(format!("({}) is not a rule of T'", tree.rule)))
            }
        }
    }

    fn shared(&mut self, tree: &Arc<DerivationTree>) -> Result<Context, TypeError> {
        let key = Arc::as_ptr(tree);
        if let Some(done) = self.seen.get(&key) {
            return Ok(done.clone());
        }
        let out = self.node(tree)?;
        self.seen.insert(key, out.clone());
        Ok(out)
    }
}

impl Kernel<'_> {
    /// The well-formed sub-context read off a T' derivation.
    pub fn curated_context(&self, tree: &DerivationTree) -> Result<Context, TypeError> {
        let mut c = Curator {
            kernel: self,
            seen: HashMap::new(),
        };
        c.node(tree)
    }

    /// Infers `t` over `ctx` in T', extracts a well-formed `Δ ⊆ ctx` and
    /// derives the judgement over `Δ` in both systems.
    pub fn curate(&self, ctx: &Context, t: &Term) -> Result<CurationResult, TypeError> {
        let (ty, tree) = self.infer_tprime(ctx, t)?;
        let delta = self.curated_context(&tree)?;
        let tprime_deriv = self
            .check_tprime(&delta, t, &ty)
            .map_err(|e| TypeError::internal(format!("the judgement does not hold over [{delta}]")).with_cause(e))?;
        let t_deriv = self.elaborate_well_formed(&tprime_deriv)?;
        Ok(CurationResult {
            delta,
            ty,
            tprime_deriv,
            t_deriv,
        })
    }

    /// Runs the whole pipeline and records each check separately.
    pub fn theorem_report(&self, ctx: &Context, t: &Term) -> TheoremReport {
        let outcome = self.curate(ctx, t).map(|r| {
            let subset = r.delta.is_subset(ctx);
            let well_formed = self.wf_check(&r.delta).is_well_formed();
            let tprime_valid = self.validate_derivation(&r.tprime_deriv, System::TPrime);
            let t_valid = self.validate_derivation(&r.t_deriv, System::T);
            let c = &r.t_deriv.conclusion;
            let conclusion_matches =
                c.ctx.alpha_eq(&r.delta) && alpha_eq(&c.subject, t) && alpha_eq(&c.ty, &r.ty);
            TheoremEvidence {
                result: r,
                subset,
                well_formed,
                tprime_valid,
                t_valid,
                conclusion_matches,
            }
        });
        TheoremReport {
            ctx: ctx.clone(),
            term: t.clone(),
            outcome,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TheoremEvidence {
    pub result: CurationResult,
    pub subset: bool,
    pub well_formed: bool,
    pub tprime_valid: Result<(), Vec<Violation>>,
    pub t_valid: Result<(), Vec<Violation>>,
    /// The T derivation concludes `Δ ⊢ t : A` for the inferred `A`.
    pub conclusion_matches: bool,
}

impl TheoremEvidence {
    pub fn holds(&self) -> bool {
        self.subset && self.well_formed && self.tprime_valid.is_ok() && self.t_valid.is_ok() && self.conclusion_matches
    }
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub ctx: Context,
    pub term: Term,
    pub outcome: Result<TheoremEvidence, TypeError>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.outcome.as_ref().is_ok_and(TheoremEvidence::holds)
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn validity(r: &Result<(), Vec<Violation>>) -> String {
    match r {
        Ok(()) => "ok".into(),
        Err(vs) => format!("FAILED ({} violations, first: {})", vs.len(), vs[0]),
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "context:  {}", self.ctx)?;
        writeln!(f, "term:     {}", self.term)?;
        match &self.outcome {
            Err(e) => writeln!(f, "T' inference: FAILED: {e}"),
            Ok(ev) => {
                writeln!(f, "type:     {}", ev.result.ty)?;
                writeln!(f, "delta:    {}", ev.result.delta)?;
                writeln!(f, "T' inference: ok")?;
                writeln!(f, "delta included in context: {}", verdict(ev.subset))?;
                writeln!(f, "delta well-formed: {}", verdict(ev.well_formed))?;
                writeln!(f, "T' derivation valid: {}", validity(&ev.tprime_valid))?;
                writeln!(f, "T derivation valid: {}", validity(&ev.t_valid))?;
                writeln!(f, "T conclusion matches: {}", verdict(ev.conclusion_matches))
            }
        }
    }
}
