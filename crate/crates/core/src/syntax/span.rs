use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::kernel::{Location, Origin, Step};
use crate::spec::SpecViolation;

/// 1-based line and column (columns count characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    /// `None` for inline text.
    pub file: Option<String>,
    pub start: Pos,
    pub end: Pos,
}

impl SourceSpan {
    pub fn new(file: Option<String>, start: Pos, end: Pos) -> Self {
        debug_assert!(start <= end);
        SourceSpan { file, start, end }
    }

    /// Smallest span covering both.
    pub fn join(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let file = self.file.as_deref().unwrap_or("<input>");
        write!(f, "{file}:{}:{}", self.start.line, self.start.col)?;
        if self.end != self.start {
            write!(f, "-{}:{}", self.end.line, self.end.col)?;
        }
        Ok(())
    }
}

/// Spans of a parsed term, keyed by the path from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermSpans {
    spans: HashMap<Vec<Step>, SourceSpan>,
}

impl TermSpans {
    pub(crate) fn insert(&mut self, path: Vec<Step>, span: SourceSpan) {
        self.spans.insert(path, span);
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = (&Vec<Step>, &SourceSpan)> {
        self.spans.iter()
    }

    /// The span of the subterm at `path`, or of its nearest recorded ancestor.
    pub fn get(&self, path: &[Step]) -> Option<&SourceSpan> {
        (0..=path.len()).rev().find_map(|n| self.spans.get(&path[..n]))
    }
}

/// Spans of a parsed context: each declared type by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContextSpans {
    pub decls: HashMap<String, TermSpans>,
}

/// Spans for every user-supplied term a typing error can point into.
#[derive(Clone, Debug, Default)]
pub struct Sources<'a> {
    pub subject: Option<&'a TermSpans>,
    pub expected: Option<&'a TermSpans>,
    pub ctx: Option<&'a ContextSpans>,
}

impl Sources<'_> {
    pub fn locate(&self, loc: &Location) -> Option<&SourceSpan> {
        let spans = match &loc.origin {
            Origin::Subject => self.subject?,
            Origin::Expected => self.expected?,
            Origin::Declaration(x) => self.ctx?.decls.get(x)?,
        };
        spans.get(&loc.path)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    DuplicateVariable(String),
    InvalidSpec(Vec<SpecViolation>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    pub(crate) fn syntax(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind: ParseErrorKind::Syntax,
            span,
            message: message.into(),
        }
    }
}
