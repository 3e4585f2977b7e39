//! Typing contexts and their algebra: inclusion, compatibility,
//! well-formedness, strengthening, merging and reordering.
//!
//! A [`Context`] is an ordered sequence of declarations with distinct
//! variables. Inclusion and compatibility treat it as a set of declarations,
//! comparing types up to α-equivalence. Order only matters for
//! well-formedness, where each declared type must be typable over the
//! declarations to its left.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::kernel::{Kernel, Location, TypeError, TypeErrorKind};
use crate::term::{alpha_eq, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Declaration {
    pub var: String,
    pub ty: Term,
}

impl Declaration {
    pub fn new(var: impl Into<String>, ty: Term) -> Self {
        Declaration { var: var.into(), ty }
    }

    fn same_as(&self, other: &Declaration) -> bool {
        self.var == other.var && alpha_eq(&self.ty, &other.ty)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    decls: Vec<Declaration>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("variable `{0}` is already declared")]
    DuplicateVariable(String),
    #[error("`{var}` occurs in the declaration of `{decl}`")]
    VariableOccurs { var: String, decl: String },
    #[error("`{var}` is declared with incompatible types")]
    Incompatible { var: String },
    #[error("`{var}` is declared with type {found}, expected {expected}")]
    TypeMismatch { var: String, found: Term, expected: Term },
    #[error("{which} context is not well-formed: {failure}")]
    NotWellFormed { which: &'static str, failure: Box<WfFailure> },
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    /// Builds a context, rejecting repeated variables.
    pub fn from_decls(decls: impl IntoIterator<Item = Declaration>) -> Result<Self, ContextError> {
        let mut ctx = Context::new();
        for d in decls {
            ctx.push(d.var, d.ty)?;
        }
        Ok(ctx)
    }

    pub fn decls(&self) -> &[Declaration] {
        &self.decls
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Declaration> {
        self.decls.iter()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn lookup(&self, x: &str) -> Option<&Term> {
        self.decls.iter().find(|d| d.var == x).map(|d| &d.ty)
    }

    pub fn position(&self, x: &str) -> Option<usize> {
        self.decls.iter().position(|d| d.var == x)
    }

    pub fn declares(&self, x: &str) -> bool {
        self.position(x).is_some()
    }

    /// Whether `x : A` (up to α) is one of the declarations.
    pub fn contains(&self, decl: &Declaration) -> bool {
        self.decls.iter().any(|d| d.same_as(decl))
    }

    /// The first `n` declarations.
    pub fn prefix(&self, n: usize) -> Context {
        Context {
            decls: self.decls[..n].to_vec(),
        }
    }

    pub fn last(&self) -> Option<&Declaration> {
        self.decls.last()
    }

    /// Declared variables.
    pub fn domain(&self) -> BTreeSet<String> {
        self.decls.iter().map(|d| d.var.clone()).collect()
    }

    /// Declared variables together with every variable free in a declared type.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = self.domain();
        for d in &self.decls {
            out.extend(d.ty.free_vars());
        }
        out
    }

    /// Whether `x` is declared or occurs free in some declared type.
    pub fn mentions(&self, x: &str) -> bool {
        self.decls.iter().any(|d| d.var == x || d.ty.occurs_free(x))
    }

    pub fn push(&mut self, x: impl Into<String>, a: Term) -> Result<(), ContextError> {
        let x = x.into();
        if self.declares(&x) {
            return Err(ContextError::DuplicateVariable(x));
        }
        self.decls.push(Declaration { var: x, ty: a });
        Ok(())
    }

    /// `Γ, x:A`; the variable must be new.
    pub fn extend(&self, x: impl Into<String>, a: Term) -> Result<Context, ContextError> {
        let mut out = self.clone();
        out.push(x, a)?;
        Ok(out)
    }

    /// Set inclusion of declarations.
    pub fn is_subset(&self, other: &Context) -> bool {
        self.decls.iter().all(|d| other.contains(d))
    }

    /// Shared variables carry α-equivalent types.
    pub fn compatible(&self, other: &Context) -> bool {
        self.first_incompatibility(other).is_none()
    }

    fn first_incompatibility(&self, other: &Context) -> Option<&str> {
        self.decls.iter().find_map(|d| match other.lookup(&d.var) {
            Some(ty) if !alpha_eq(ty, &d.ty) => Some(d.var.as_str()),
            _ => None,
        })
    }

    /// Same variables in the same order with α-equivalent types.
    pub fn alpha_eq(&self, other: &Context) -> bool {
        self.len() == other.len() && self.decls.iter().zip(&other.decls).all(|(a, b)| a.same_as(b))
    }
}

impl<'a> IntoIterator for &'a Context {
    type Item = &'a Declaration;
    type IntoIter = std::slice::Iter<'a, Declaration>;

    fn into_iter(self) -> Self::IntoIter {
        self.decls.iter()
    }
}

impl fmt::Display for Declaration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.var, self.ty)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.decls.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// `Γ1, Γ2` from `Γ1, x:A, Γ2`, provided `x` does not occur in `Γ2`.
pub fn strengthen_context(g1: &Context, x: &str, g2: &Context) -> Result<Context, ContextError> {
    if let Some(d) = g2.iter().find(|d| d.ty.occurs_free(x)) {
        return Err(ContextError::VariableOccurs {
            var: x.to_string(),
            decl: d.var.clone(),
        });
    }
    Context::from_decls(g1.iter().chain(g2).cloned())
}

/// The declaration at `index` whose type is not sorted over its prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WfFailure {
    pub index: usize,
    pub var: String,
    pub error: TypeError,
}

impl fmt::Display for WfFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "declaration {} (`{}`): {}", self.index, self.var, self.error)
    }
}

impl WfFailure {
    pub fn to_type_error(&self) -> TypeError {
        TypeError::new(
            TypeErrorKind::NotWellFormed {
                index: self.index,
                var: self.var.clone(),
            },
            Location::declaration(&self.var),
            format!("the type of `{}` is not well-typed over the declarations before it", self.var),
        )
        .with_cause(self.error.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WfReport {
    /// First failing declaration, if any.
    pub failure: Option<WfFailure>,
}

impl WfReport {
    pub fn is_well_formed(&self) -> bool {
        self.failure.is_none()
    }
}

impl Kernel<'_> {
    /// Checks `x1:A1, ..., xi:Ai ⊢ A(i+1) : s` for every prefix and reports the
    /// first declaration that fails.
    pub fn wf_check(&self, ctx: &Context) -> WfReport {
        for (index, d) in ctx.iter().enumerate() {
            let prefix = ctx.prefix(index);
            if let Err(error) = self.infer_sort(&prefix, &d.ty, Location::declaration(&d.var)) {
                return WfReport {
                    failure: Some(WfFailure {
                        index,
                        var: d.var.clone(),
                        error,
                    }),
                };
            }
        }
        WfReport { failure: None }
    }

    /// A well-formed context containing both inputs and contained in their
    /// concatenation: the declarations of `g2` missing from `g1` are appended
    /// in `g2`'s order.
    pub fn merge(&self, g1: &Context, g2: &Context) -> Result<Context, ContextError> {
        if let Some(var) = g1.first_incompatibility(g2) {
            return Err(ContextError::Incompatible { var: var.to_string() });
        }
        for (which, g) in [("first", g1), ("second", g2)] {
            if let Some(failure) = self.wf_check(g).failure {
                return Err(ContextError::NotWellFormed {
                    which,
                    failure: Box::new(failure),
                });
            }
        }
        let mut out = g1.clone();
        for d in g2 {
            if !out.declares(&d.var) {
                out.push(d.var.clone(), d.ty.clone())?;
            }
        }
        Ok(out)
    }

    /// Removes `x : c` from `gprime` so that `gprime', x:c` is a context.
    ///
    /// Requires `gprime ⊆ Γ, x:c` for some `Γ` in which `x` does not occur, so
    /// no declaration after `x` may mention it.
    pub fn reorder(&self, gprime: &Context, x: &str, c: &Term) -> Result<Context, ContextError> {
        let Some(i) = gprime.position(x) else {
            return Ok(gprime.clone());
        };
        let decl = &gprime.decls[i];
        if !alpha_eq(&decl.ty, c) {
            return Err(ContextError::TypeMismatch {
                var: x.to_string(),
                found: decl.ty.clone(),
                expected: c.clone(),
            });
        }
        let (head, tail) = (gprime.prefix(i), Context { decls: gprime.decls[i + 1..].to_vec() });
        strengthen_context(&head, x, &tail)
    }
}
