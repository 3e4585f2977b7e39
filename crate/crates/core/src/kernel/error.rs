use std::fmt;

use thiserror::Error;

/// One step from a term to one of its immediate subterms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Fun,
    Arg,
    Domain,
    /// Codomain of a product or body of an abstraction.
    Body,
}

/// Which user-supplied term a [`Location`] path starts from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Subject,
    Expected,
    /// The declared type of a context variable.
    Declaration(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Location {
    pub origin: Origin,
    pub path: Vec<Step>,
}

impl Location {
    pub fn subject() -> Self {
        Location {
            origin: Origin::Subject,
            path: Vec::new(),
        }
    }

    pub fn expected() -> Self {
        Location {
            origin: Origin::Expected,
            path: Vec::new(),
        }
    }

    pub fn declaration(var: impl Into<String>) -> Self {
        Location {
            origin: Origin::Declaration(var.into()),
            path: Vec::new(),
        }
    }

    pub fn child(&self, step: Step) -> Self {
        let mut path = self.path.clone();
        path.push(step);
        Location {
            origin: self.origin.clone(),
            path,
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.origin {
            Origin::Subject => write!(f, "term")?,
            Origin::Expected => write!(f, "expected type")?,
            Origin::Declaration(x) => write!(f, "type of {x}")?,
        }
        for step in &self.path {
            let s = match step {
                Step::Fun => "fun",
                Step::Arg => "arg",
                Step::Domain => "domain",
                Step::Body => "body",
            };
            write!(f, ".{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeErrorKind {
    UnboundVariable,
    NotASort,
    NotAProduct,
    Mismatch,
    NoAxiom,
    NoRule,
    CyclicContextDependency,
    ConversionUndecided,
    DuplicateVariable,
    /// The declaration at `index` is not typable over its prefix.
    NotWellFormed { index: usize, var: String },
    /// A kernel invariant was broken by its input.
    Internal,
}

impl TypeErrorKind {
    pub fn name(&self) -> &'static str {
        match self {
            TypeErrorKind::UnboundVariable => "UnboundVariable",
            TypeErrorKind::NotASort => "NotASort",
            TypeErrorKind::NotAProduct => "NotAProduct",
            TypeErrorKind::Mismatch => "Mismatch",
            TypeErrorKind::NoAxiom => "NoAxiom",
            TypeErrorKind::NoRule => "NoRule",
            TypeErrorKind::CyclicContextDependency => "CyclicContextDependency",
            TypeErrorKind::ConversionUndecided => "ConversionUndecided",
            TypeErrorKind::DuplicateVariable => "DuplicateVariable",
            TypeErrorKind::NotWellFormed { .. } => "NotWellFormed",
            TypeErrorKind::Internal => "Internal",
        }
    }
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind}: {detail} (at {location})")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub location: Location,
    pub detail: String,
    /// The failure underneath a `NotWellFormed` error.
    pub cause: Option<Box<TypeError>>,
}

impl TypeError {
    pub fn new(kind: TypeErrorKind, location: Location, detail: impl Into<String>) -> Self {
        TypeError {
            kind,
            location,
            detail: detail.into(),
            cause: None,
        }
    }

    pub fn internal(detail: impl Into<String>) -> Self {
        TypeError::new(TypeErrorKind::Internal, Location::subject(), detail)
    }

    pub fn with_cause(mut self, cause: TypeError) -> Self {
        self.cause = Some(Box::new(cause));
        self
    }

    /// True when this failure, or the one underneath it, is an undecided
    /// conversion rather than a definite rejection.
    pub fn is_undecided(&self) -> bool {
        self.kind == TypeErrorKind::ConversionUndecided
            || self.cause.as_ref().is_some_and(|c| c.is_undecided())
    }
}
