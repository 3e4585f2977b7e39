use std::collections::BTreeSet;

use super::lexer::{lex, Tok, Token};
use super::span::{ContextSpans, ParseError, ParseErrorKind, Pos, SourceSpan, TermSpans};
use crate::context::Context;
use crate::kernel::Step;
use crate::spec::{PtsSpec, BOX, STAR};
use crate::term::{fresh_name, Term, Var};

/// Parser configuration: which identifiers are sorts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syntax {
    sorts: BTreeSet<String>,
}

impl Default for Syntax {
    /// `*` and `BOX`.
    fn default() -> Self {
        Syntax {
            sorts: [STAR, BOX].into_iter().map(String::from).collect(),
        }
    }
}

impl Syntax {
    pub fn for_spec(spec: &PtsSpec) -> Self {
        Syntax {
            sorts: spec.sorts().clone(),
        }
    }

    pub fn is_sort(&self, name: &str) -> bool {
        self.sorts.contains(name)
    }

    pub fn term(&self, src: &str) -> Result<Term, ParseError> {
        self.term_with_spans(src, None).map(|(t, _)| t)
    }

    pub fn term_with_spans(&self, src: &str, file: Option<&str>) -> Result<(Term, TermSpans), ParseError> {
        let mut p = Parser::new(self, src, file, false)?;
        let mut spans = TermSpans::default();
        let t = p.term(&mut Vec::new(), &mut spans)?;
        p.expect_end()?;
        Ok((t, spans))
    }

    pub fn context(&self, src: &str) -> Result<Context, ParseError> {
        self.context_with_spans(src, None).map(|(c, _)| c)
    }

    /// Declarations `x : A` separated by commas or line breaks.
    pub fn context_with_spans(&self, src: &str, file: Option<&str>) -> Result<(Context, ContextSpans), ParseError> {
        let mut p = Parser::new(self, src, file, true)?;
        let mut ctx = Context::new();
        let mut spans = ContextSpans::default();
        loop {
            while matches!(p.peek_raw(), Tok::Comma | Tok::Newline) {
                p.bump();
            }
            if *p.peek_raw() == Tok::Eof {
                break;
            }
            let (x, xspan) = p.ident("a variable name")?;
            if self.is_sort(&x) {
                return Err(ParseError::syntax(xspan, format!("the sort `{x}` cannot be declared as a variable")));
            }
            p.expect(Tok::Colon)?;
            let mut tspans = TermSpans::default();
            let ty = p.term(&mut Vec::new(), &mut tspans)?;
            if ctx.declares(&x) {
                return Err(ParseError {
                    kind: ParseErrorKind::DuplicateVariable(x.clone()),
                    span: xspan,
                    message: format!("`{x}` is declared twice"),
                });
            }
            ctx.push(x.clone(), ty).expect("checked above");
            spans.decls.insert(x, tspans);
            match p.peek_raw() {
                Tok::Comma | Tok::Newline | Tok::Eof => {}
                other => {
                    let other = other.describe();
                    return Err(ParseError::syntax(p.span_here(), format!("expected `,` or a new line, found {other}")));
                }
            }
        }
        Ok((ctx, spans))
    }
}

struct Parser<'a> {
    syntax: &'a Syntax,
    toks: Vec<Token>,
    idx: usize,
    file: Option<String>,
    /// Line breaks end declarations outside parentheses.
    newline_sep: bool,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn new(syntax: &'a Syntax, src: &str, file: Option<&str>, newline_sep: bool) -> Result<Self, ParseError> {
        Ok(Parser {
            syntax,
            toks: lex(src, file)?,
            idx: 0,
            file: file.map(str::to_string),
            newline_sep,
            depth: 0,
        })
    }

    fn skip_newlines(&mut self) {
        if self.depth > 0 || !self.newline_sep {
            while self.toks[self.idx].tok == Tok::Newline {
                self.idx += 1;
            }
        }
    }

    fn peek_raw(&self) -> &Tok {
        &self.toks[self.idx].tok
    }

    fn peek(&mut self) -> &Tok {
        self.skip_newlines();
        &self.toks[self.idx].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let mut i = self.idx;
        let mut left = n;
        loop {
            match &self.toks[i].tok {
                Tok::Newline => {}
                Tok::Eof => return &Tok::Eof,
                t if left == 0 => return t,
                _ => left -= 1,
            }
            i += 1;
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.idx].clone();
        if t.tok != Tok::Eof {
            self.idx += 1;
        }
        t
    }

    fn span(&self, start: Pos, end: Pos) -> SourceSpan {
        SourceSpan::new(self.file.clone(), start, end)
    }

    fn span_here(&self) -> SourceSpan {
        let t = &self.toks[self.idx];
        self.span(t.start, t.end)
    }

    fn last_end(&self) -> Pos {
        self.toks[self.idx.saturating_sub(1)].end
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            if tok == Tok::LParen {
                self.depth += 1;
            } else if tok == Tok::RParen {
                self.depth = self.depth.saturating_sub(1);
            }
            Ok(self.bump())
        } else {
            let found = self.peek().describe();
            Err(ParseError::syntax(self.span_here(), format!("expected {}, found {found}", tok.describe())))
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => {
                let other = other.describe();
                Err(ParseError::syntax(self.span_here(), format!("unexpected {other} after the term")))
            }
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let t = self.bump();
                Ok((name, self.span(t.start, t.end)))
            }
            other => Err(ParseError::syntax(self.span_here(), format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        let (x, span) = self.ident("a binder name")?;
        if self.syntax.is_sort(&x) {
            return Err(ParseError::syntax(span, format!("the sort `{x}` cannot be bound")));
        }
        Ok(x)
    }

    fn record(&self, spans: &mut TermSpans, path: &[Step], start: Pos) {
        spans.insert(path.to_vec(), self.span(start, self.last_end()));
    }

    fn child(
        &mut self,
        path: &mut Vec<Step>,
        step: Step,
        spans: &mut TermSpans,
        f: impl FnOnce(&mut Self, &mut Vec<Step>, &mut TermSpans) -> Result<Term, ParseError>,
    ) -> Result<Term, ParseError> {
        path.push(step);
        let out = f(self, path, spans);
        path.pop();
        out
    }

    /// term := `\` x `:` term `.` term | `(` x `:` term `)` `->` term | app [`->` term]
    fn term(&mut self, path: &mut Vec<Step>, spans: &mut TermSpans) -> Result<Term, ParseError> {
        let start = {
            self.skip_newlines();
            self.toks[self.idx].start
        };
        let t = match self.peek().clone() {
            Tok::Lambda => {
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::Colon)?;
                let a = self.child(path, Step::Domain, spans, |p, path, spans| p.term(path, spans))?;
                self.expect(Tok::Dot)?;
                let b = self.child(path, Step::Body, spans, |p, path, spans| p.term(path, spans))?;
                Term::abs(x, a, b)
            }
            Tok::LParen if matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Colon => {
                self.expect(Tok::LParen)?;
                let x = self.binder()?;
                self.expect(Tok::Colon)?;
                let a = self.child(path, Step::Domain, spans, |p, path, spans| p.term(path, spans))?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Arrow)?;
                let b = self.child(path, Step::Body, spans, |p, path, spans| p.term(path, spans))?;
                Term::prod(x, a, b)
            }
            _ => {
                let mut local = TermSpans::default();
                let a = self.app(&mut Vec::new(), &mut local)?;
                let arrow = *self.peek() == Tok::Arrow;
                let mut base = path.to_vec();
                if arrow {
                    base.push(Step::Domain);
                }
                for (sub, span) in local.iter() {
                    spans.insert(base.iter().chain(sub).copied().collect(), span.clone());
                }
                if arrow {
                    self.bump();
                    let b = self.child(path, Step::Body, spans, |p, path, spans| p.term(path, spans))?;
                    let x = fresh_name("_", &b.free_vars());
                    Term::prod(x, a, b)
                } else {
                    return Ok(a);
                }
            }
        };
        self.record(spans, path, start);
        Ok(t)
    }

    /// Left-associated application of atoms; a trailing abstraction is allowed
    /// as the last argument.
    fn app(&mut self, path: &mut [Step], spans: &mut TermSpans) -> Result<Term, ParseError> {
        let start = {
            self.skip_newlines();
            self.toks[self.idx].start
        };
        // arguments are parsed first with paths relative to the whole spine,
        // then re-keyed once the spine length is known
        let mut items: Vec<(Term, TermSpans)> = Vec::new();
        loop {
            let mut local = TermSpans::default();
            let mut trailing = false;
            let next = match self.peek().clone() {
                Tok::Ident(_) | Tok::LParen => self.atom(&mut Vec::new(), &mut local)?,
                Tok::Lambda if !items.is_empty() => {
                    trailing = true;
                    self.term(&mut Vec::new(), &mut local)?
                }
                _ if items.is_empty() => {
                    let found = self.peek().describe();
                    return Err(ParseError::syntax(self.span_here(), format!("expected a term, found {found}")));
                }
                _ => break,
            };
            items.push((next, local));
            if trailing {
                break;
            }
        }
        let n = items.len();
        let mut term: Option<Term> = None;
        for (i, (t, local)) in items.into_iter().enumerate() {
            // item i sits at path ++ [Fun; n-1-i] ++ ([Arg] if i > 0)
            let mut base = path.to_vec();
            base.extend(std::iter::repeat_n(Step::Fun, n - 1 - i));
            if i > 0 {
                base.push(Step::Arg);
            }
            for (sub, span) in local.iter() {
                let mut full = base.clone();
                full.extend(sub.iter().copied());
                spans.insert(full, span.clone());
            }
            term = Some(match term {
                None => t,
                Some(f) => {
                    let fun_path: Vec<Step> = path.iter().copied().chain(std::iter::repeat_n(Step::Fun, n - 1 - i)).collect();
                    let end = local.get(&[]).map(|s| s.end).unwrap_or(start);
                    spans.insert(fun_path, self.span(start, end));
                    Term::app(f, t)
                }
            });
        }
        Ok(term.expect("at least one item"))
    }

    /// atom := x [`@` s] | s | `(` term `)`
    fn atom(&mut self, path: &mut Vec<Step>, spans: &mut TermSpans) -> Result<Term, ParseError> {
        let start = self.toks[self.idx].start;
        let t = match self.peek().clone() {
            Tok::Ident(name) => {
                let tok = self.bump();
                if self.syntax.is_sort(&name) {
                    if *self.peek_raw() == Tok::At {
                        return Err(ParseError::syntax(self.span(tok.start, tok.end), "sorts cannot carry a sort tag"));
                    }
                    Term::sort(name)
                } else if *self.peek_raw() == Tok::At {
                    self.bump();
                    let (s, span) = self.ident("a sort name")?;
                    if !self.syntax.is_sort(&s) {
                        return Err(ParseError::syntax(span, format!("`{s}` is not a sort")));
                    }
                    Term::Var(Var::tagged(name, s))
                } else {
                    Term::var(name)
                }
            }
            Tok::LParen => {
                self.expect(Tok::LParen)?;
                let t = self.term(path, spans)?;
                self.expect(Tok::RParen)?;
                t
            }
            other => {
                return Err(ParseError::syntax(self.span_here(), format!("expected a term, found {}", other.describe())))
            }
        };
        self.record(spans, path, start);
        Ok(t)
    }
}

/// Reads a spec file: `name <id>`, `sort <id>`, `axiom <id> : <id>` and
/// `rule (<id>, <id>) : <id>`, one per line; `#` starts a comment.
pub fn parse_spec(src: &str, file: Option<&str>) -> Result<PtsSpec, ParseError> {
    let toks = lex(src, file)?;
    let mut spec = PtsSpec::new(file.unwrap_or("custom"));
    let span = |t: &Token| SourceSpan::new(file.map(str::to_string), t.start, t.end);
    let lines = toks.split(|t| matches!(t.tok, Tok::Newline | Tok::Eof));
    for line in lines.filter(|l| !l.is_empty()) {
        let words: Vec<&Tok> = line.iter().map(|t| &t.tok).collect();
        let id = |i: usize| match words.get(i) {
            Some(Tok::Ident(s)) => Ok(s.clone()),
            _ => Err(ParseError::syntax(
                span(line.get(i).unwrap_or(line.last().expect("non-empty"))),
                "expected an identifier",
            )),
        };
        let shape = |expected: &[Option<Tok>]| -> Result<(), ParseError> {
            for (i, want) in expected.iter().enumerate() {
                let ok = match (want, words.get(i)) {
                    (None, Some(Tok::Ident(_))) => true,
                    (Some(w), Some(t)) => w == *t,
                    _ => false,
                };
                if !ok {
                    let at = line.get(i).unwrap_or(line.last().expect("non-empty"));
                    return Err(ParseError::syntax(span(at), "malformed spec line"));
                }
            }
            if words.len() > expected.len() {
                return Err(ParseError::syntax(span(&line[expected.len()]), "unexpected text at end of line"));
            }
            Ok(())
        };
        match words[0] {
            Tok::Ident(k) if k == "name" => {
                shape(&[None, None])?;
                spec.set_name(id(1)?);
            }
            Tok::Ident(k) if k == "sort" => {
                shape(&[None, None])?;
                spec.add_sort(id(1)?);
            }
            Tok::Ident(k) if k == "axiom" => {
                shape(&[None, None, Some(Tok::Colon), None])?;
                spec.add_axiom(id(1)?, id(3)?);
            }
            Tok::Ident(k) if k == "rule" => {
                shape(&[
                    None,
                    Some(Tok::LParen),
                    None,
                    Some(Tok::Comma),
                    None,
                    Some(Tok::RParen),
                    Some(Tok::Colon),
                    None,
                ])?;
                spec.add_rule(id(2)?, id(4)?, id(7)?);
            }
            _ => {
                return Err(ParseError::syntax(
                    span(&line[0]),
                    "expected `name`, `sort`, `axiom` or `rule`",
                ))
            }
        }
    }
    let violations = spec.validate();
    if !violations.is_empty() {
        let message = violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
        let at = toks.first().expect("eof token");
        return Err(ParseError {
            kind: ParseErrorKind::InvalidSpec(violations),
            span: span(at),
            message,
        });
    }
    Ok(spec)
}
