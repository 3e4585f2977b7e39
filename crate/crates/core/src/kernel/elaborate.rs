//! From T' to T over well-formed contexts.
//!
//! (sort') becomes (sort) over the empty context followed by one (weak) per
//! declaration. (var') for `Γ1, x:A, Γ2 ⊢ x : A` becomes (start) over `Γ1`
//! followed by (weak) through `Γ2`. Every other rule is mapped node for node.
//! The second premise of each (weak), `Γ ⊢ B : s`, is rebuilt by inferring
//! the sort of `B` over its prefix and elaborating that derivation in turn.

use std::collections::HashMap;
use std::sync::Arc;

use super::{DerivationTree, Judgement, Kernel, Location, RuleName, Side, TypeError};
use crate::context::Context;
use crate::term::Term;

struct Elaborator<'a, 'k> {
    kernel: &'a Kernel<'k>,
    /// T derivation of `Γ ⊢ A : s` keyed by `Γ, x:A`.
    decls: HashMap<Context, Arc<DerivationTree>>,
    /// Weakened (sort) and (start) leaves keyed by context and subject.
    leaves: HashMap<(Context, Term), Arc<DerivationTree>>,
    nodes: HashMap<*const DerivationTree, Arc<DerivationTree>>,
    /// Keeps T' trees built here alive so their addresses stay unique keys.
    keep: Vec<Arc<DerivationTree>>,
}

impl Elaborator<'_, '_> {
    fn node(&mut self, tree: &Arc<DerivationTree>) -> Result<Arc<DerivationTree>, TypeError> {
        let key = Arc::as_ptr(tree);
        if let Some(done) = self.nodes.get(&key) {
            return Ok(done.clone());
        }
        let c = &tree.conclusion;
        let out = match tree.rule {
            RuleName::SortPrime => self.weakened(&c.ctx, &c.subject, 0)?,
            RuleName::VarPrime => {
                let Term::Var(x) = &c.subject else {
                    return Err(TypeError::internal("(var') node without a variable subject"));
                };
                let pos = c
                    .ctx
                    .position(&x.name)
                    .ok_or_else(|| TypeError::internal(format!("`{}` is not declared", x.name)))?;
                self.weakened(&c.ctx, &c.subject, pos + 1)?
            }
            RuleName::Prod | RuleName::Abs | RuleName::App | RuleName::Conv => {
                let premises = tree
                    .premises
                    .iter()
                    .map(|p| self.node(p))
                    .collect::<Result<Vec<_>, _>>()?;
                Arc::new(DerivationTree::new(tree.rule, c.clone(), tree.side.clone(), premises))
            }
            RuleName::Sort | RuleName::Start | RuleName::Weak => {
                return Err(TypeError::internal(format!("({}) is not a rule of T'", tree.rule)))
            }
        };
        self.nodes.insert(key, out.clone());
        Ok(out)
    }

    /// The leaf for `subject` over `ctx.prefix(base)` weakened up to `ctx`.
    /// `subject` is a sort (`base` = 0) or the variable declared last in the
    /// prefix.
    fn weakened(&mut self, ctx: &Context, subject: &Term, base: usize) -> Result<Arc<DerivationTree>, TypeError> {
        let key = (ctx.clone(), subject.clone());
        if let Some(done) = self.leaves.get(&key) {
            return Ok(done.clone());
        }
        let out = if ctx.len() == base {
            self.leaf(ctx, subject)?
        } else {
            let head = ctx.prefix(ctx.len() - 1);
            let inner = self.weakened(&head, subject, base)?;
            let decl = self.decl(ctx)?;
            let side = Side {
                sort: decl.conclusion.ty.as_sort().map(str::to_string),
                ..Side::default()
            };
            let judgement = Judgement::new(ctx.clone(), inner.conclusion.subject.clone(), inner.conclusion.ty.clone());
            Arc::new(DerivationTree::new(RuleName::Weak, judgement, side, vec![inner, decl]))
        };
        self.leaves.insert(key, out.clone());
        Ok(out)
    }

    fn leaf(&mut self, ctx: &Context, subject: &Term) -> Result<Arc<DerivationTree>, TypeError> {
        match subject {
            Term::Sort(s1) => {
                let s2 = self
                    .kernel
                    .spec()
                    .axiom_sort(s1)
                    .ok()
                    .flatten()
                    .ok_or_else(|| TypeError::internal(format!("sort {s1} has no axiom")))?
                    .to_string();
                let side = Side {
                    axiom: Some((s1.clone(), s2.clone())),
                    ..Side::default()
                };
                let j = Judgement::new(Context::new(), subject.clone(), Term::Sort(s2));
                Ok(Arc::new(DerivationTree::leaf(RuleName::Sort, j, side)))
            }
            Term::Var(_) => {
                let decl = self.decl(ctx)?;
                let ty = ctx.last().map(|d| d.ty.clone()).expect("non-empty context");
                let side = Side {
                    sort: decl.conclusion.ty.as_sort().map(str::to_string),
                    ..Side::default()
                };
                let j = Judgement::new(ctx.clone(), subject.clone(), ty);
                Ok(Arc::new(DerivationTree::new(RuleName::Start, j, side, vec![decl])))
            }
            _ => Err(TypeError::internal(format!("{subject} is neither a sort nor a variable"))),
        }
    }

    /// T derivation of `Γ ⊢ A : s` where `ctx` is `Γ, x:A`.
    fn decl(&mut self, ctx: &Context) -> Result<Arc<DerivationTree>, TypeError> {
        if let Some(done) = self.decls.get(ctx) {
            return Ok(done.clone());
        }
        let d = ctx.last().ok_or_else(|| TypeError::internal("empty context has no last declaration"))?;
        let head = ctx.prefix(ctx.len() - 1);
        let (_, tprime) = self
            .kernel
            .infer_sort(&head, &d.ty, Location::declaration(&d.var))
            .map_err(|e| TypeError::internal(format!("context is not well-formed at `{}`", d.var)).with_cause(e))?;
        self.keep.push(tprime.clone());
        let out = self.node(&tprime)?;
        self.decls.insert(ctx.clone(), out.clone());
        Ok(out)
    }
}

impl Kernel<'_> {
    /// Turns a T' derivation over a well-formed context into a T derivation
    /// of the same judgement. Fails with `NotWellFormed` when the context is
    /// not well-formed.
    pub fn elaborate_key_lemma(&self, tree: &DerivationTree) -> Result<DerivationTree, TypeError> {
        if let Some(failure) = self.wf_check(&tree.conclusion.ctx).failure {
            return Err(failure.to_type_error());
        }
        self.elaborate_well_formed(tree)
    }

    pub(crate) fn elaborate_well_formed(&self, tree: &DerivationTree) -> Result<DerivationTree, TypeError> {
        let mut e = Elaborator {
            kernel: self,
            decls: HashMap::new(),
            leaves: HashMap::new(),
            nodes: HashMap::new(),
            keep: Vec::new(),
        };
        let root = Arc::new(tree.clone());
        let out = e.node(&root)?;
        // the root may only differ from its T' source in the type's binders
        Ok((*out).clone().with_type(tree.conclusion.ty.clone()))
    }
}
