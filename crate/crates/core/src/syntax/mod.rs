//! Surface syntax for terms, contexts and spec files.
//!
//! ```text
//! term ::= \x : term. term          abstraction (also λ)
//!        | (x : term) -> term       product (also →)
//!        | term -> term             non-dependent product
//!        | term term                application, left associative
//!        | x | x@s | s | (term)
//! ```
//!
//! Sorts are the identifiers declared as sorts (`*` and `BOX` unless a spec
//! says otherwise; `□` reads as `BOX`). `#` starts a comment.

mod lexer;
mod parser;
mod printer;
mod span;

pub use parser::{parse_spec, Syntax};
pub use printer::print_term;
pub use span::{ContextSpans, ParseError, ParseErrorKind, Pos, SourceSpan, Sources, TermSpans};

use crate::context::Context;
use crate::term::Term;

/// Parses a term with the default sorts `*` and `BOX`.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    Syntax::default().term(src)
}

/// Parses a context with the default sorts `*` and `BOX`.
pub fn parse_context(src: &str) -> Result<Context, ParseError> {
    Syntax::default().context(src)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Step;
    use crate::spec::builtin;

    #[test]
    fn term_examples() {
        assert_eq!(
            parse_term("(x : nat) -> nat").unwrap(),
            Term::prod("x", Term::var("nat"), Term::var("nat"))
        );
        assert_eq!(
            parse_term("\\y : nat. f x y").unwrap(),
            Term::abs("y", Term::var("nat"), Term::apps(Term::var("f"), [Term::var("x"), Term::var("y")]))
        );
        assert_eq!(
            parse_term("array z z").unwrap(),
            Term::apps(Term::var("array"), [Term::var("z"), Term::var("z")])
        );
        assert_eq!(parse_term("λx:□. x").unwrap(), Term::abs("x", Term::sort("BOX"), Term::var("x")));
        assert!(parse_term("nat -> _").unwrap().alpha_eq(&Term::prod("_'", Term::var("nat"), Term::var("_"))));
    }

    #[test]
    fn term_errors() {
        for src in ["", "(x", "\\x nat. x", "x)", "* @*", "f ->", "\\* : *. *", "x@nat"] {
            let e = parse_term(src).unwrap_err();
            assert_eq!(e.kind, ParseErrorKind::Syntax, "{src}");
        }
        let e = parse_term("f\n  )").unwrap_err();
        assert_eq!(e.span.start, Pos { line: 2, col: 3 });
    }

    #[test]
    fn context_examples() {
        assert_eq!(parse_context("nat : *, z : nat").unwrap().len(), 2);
        assert!(parse_context("").unwrap().is_empty());
        assert_eq!(parse_context("nat : *\n\nz : nat # comment\n").unwrap().len(), 2);
        assert_eq!(parse_context("f : (nat\n -> nat)").unwrap().len(), 1);
        let e = parse_context("x : nat, x : bool").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateVariable("x".into()));
        assert_eq!(e.span.start, Pos { line: 1, col: 10 });
    }

    #[test]
    fn spans_follow_paths() {
        let (_, spans) = Syntax::default().term_with_spans("\\y : nat. f (g q)", None).unwrap();
        let at = |path: &[Step]| spans.get(path).map(|s| (s.start.col, s.end.col));
        assert_eq!(at(&[]), Some((1, 18)));
        assert_eq!(at(&[Step::Domain]), Some((6, 9)));
        assert_eq!(at(&[Step::Body, Step::Fun]), Some((11, 12)));
        assert_eq!(at(&[Step::Body, Step::Arg]), Some((13, 18)));
        assert_eq!(at(&[Step::Body, Step::Arg, Step::Arg]), Some((16, 17)));

        let (_, spans) = Syntax::default().term_with_spans("a b -> c d", None).unwrap();
        let at = |path: &[Step]| spans.get(path).map(|s| (s.start.col, s.end.col));
        assert_eq!(at(&[Step::Domain, Step::Arg]), Some((3, 4)));
        assert_eq!(at(&[Step::Body, Step::Fun]), Some((8, 9)));
    }

    #[test]
    fn spec_files() {
        let stlc = parse_spec("sort *\nsort BOX\naxiom * : BOX\nrule (*, *) : *\n", None).unwrap();
        assert!(stlc.same_system(&builtin("stlc").unwrap()));
        let e = parse_spec("axiom * : BOX", None).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::InvalidSpec(_)));
        let e = parse_spec("sort *\nsort BOX\nsort T\naxiom * : BOX\naxiom * : T # two types\n", None).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::InvalidSpec(ref v) if v.len() == 1));
        let e = parse_spec("sort *\nrule * * : *", None).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.span.start.line, 2);
    }
}
