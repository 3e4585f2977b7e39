use std::fmt;

use crate::term::Term;

/// Binding strength of the position a term is printed in.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    /// Anything goes: abstractions and products extend to the right.
    Top,
    /// Domain of an arrow or head of an application.
    App,
    /// Argument of an application.
    Atom,
}

fn needs_parens(t: &Term, prec: Prec) -> bool {
    match t {
        Term::Var(_) | Term::Sort(_) => false,
        Term::App(..) => prec == Prec::Atom,
        Term::Prod(..) | Term::Abs(..) => prec > Prec::Top,
    }
}

/// Arrow sugar is used only for binders the parser would have invented.
fn is_arrow(x: &str, body: &Term) -> bool {
    x.starts_with('_') && !body.occurs_free(x)
}

fn write(f: &mut fmt::Formatter<'_>, t: &Term, prec: Prec) -> fmt::Result {
    if needs_parens(t, prec) {
        f.write_str("(")?;
        write(f, t, Prec::Top)?;
        return f.write_str(")");
    }
    match t {
        Term::Var(v) => {
            f.write_str(&v.name)?;
            if let Some(s) = &v.sort_class {
                write!(f, "@{s}")?;
            }
            Ok(())
        }
        Term::Sort(s) => f.write_str(s),
        Term::Prod(x, a, b) if is_arrow(x, b) => {
            write(f, a, Prec::App)?;
            f.write_str(" -> ")?;
            write(f, b, Prec::Top)
        }
        Term::Prod(x, a, b) => {
            write!(f, "({x} : ")?;
            write(f, a, Prec::Top)?;
            f.write_str(") -> ")?;
            write(f, b, Prec::Top)
        }
        Term::Abs(x, a, b) => {
            write!(f, "\\{x} : ")?;
            write(f, a, Prec::Top)?;
            f.write_str(". ")?;
            write(f, b, Prec::Top)
        }
        Term::App(fun, arg) => {
            write(f, fun, Prec::App)?;
            f.write_str(" ")?;
            write(f, arg, Prec::Atom)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(f, self, Prec::Top)
    }
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}
