//! β-reduction with an explicit step budget, and the conversion test used by
//! the (conv) rule.

use thiserror::Error;

use crate::term::{alpha_eq, substitute, Term};

pub const DEFAULT_FUEL: u64 = 10_000;

/// Maximum number of β-steps a single reduction may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fuel(pub u64);

impl Default for Fuel {
    fn default() -> Self {
        Fuel(DEFAULT_FUEL)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("fuel exhausted after {steps} beta steps")]
pub struct FuelExhausted {
    pub last: Term,
    pub steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conversion {
    Yes,
    No,
    Undecided,
}

/// Contracts the leftmost-outermost redex, if any.
pub fn beta_step(t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) | Term::Sort(_) => None,
        Term::App(f, a) => {
            if let Term::Abs(x, _, body) = &**f {
                return Some(substitute(body, x, a));
            }
            if let Some(f2) = beta_step(f) {
                return Some(Term::App(Box::new(f2), a.clone()));
            }
            beta_step(a).map(|a2| Term::App(f.clone(), Box::new(a2)))
        }
        Term::Prod(x, a, b) | Term::Abs(x, a, b) => {
            let rebuild = |a: Box<Term>, b: Box<Term>| match t {
                Term::Prod(..) => Term::Prod(x.clone(), a, b),
                _ => Term::Abs(x.clone(), a, b),
            };
            if let Some(a2) = beta_step(a) {
                return Some(rebuild(Box::new(a2), b.clone()));
            }
            beta_step(b).map(|b2| rebuild(a.clone(), Box::new(b2)))
        }
    }
}

/// β-normal form by leftmost-outermost reduction.
pub fn normalize(t: &Term, fuel: Fuel) -> Result<Term, FuelExhausted> {
    let mut current = t.clone();
    let mut steps = 0;
    loop {
        match beta_step(&current) {
            None => return Ok(current),
            Some(_) if steps >= fuel.0 => return Err(FuelExhausted { last: current, steps }),
            Some(next) => {
                current = next;
                steps += 1;
            }
        }
    }
}

/// Weak-head normal form: reduces head redexes only.
pub fn whnf(t: &Term, fuel: Fuel) -> Result<Term, FuelExhausted> {
    let mut head = t.clone();
    let mut args: Vec<Term> = Vec::new();
    let mut steps = 0;
    loop {
        match head {
            Term::App(f, a) => {
                args.push(*a);
                head = *f;
            }
            Term::Abs(x, domain, body) if !args.is_empty() => {
                if steps >= fuel.0 {
                    let head = Term::Abs(x, domain, body);
                    return Err(FuelExhausted {
                        last: rebuild_spine(head, args),
                        steps,
                    });
                }
                let arg = args.pop().expect("non-empty spine");
                head = substitute(&body, &x, &arg);
                steps += 1;
            }
            other => return Ok(rebuild_spine(other, args)),
        }
    }
}

// `args` holds the spine innermost-last: the next argument is at the end.
fn rebuild_spine(head: Term, mut args: Vec<Term>) -> Term {
    let mut t = head;
    while let Some(a) = args.pop() {
        t = Term::app(t, a);
    }
    t
}

/// β-convertibility decided by comparing normal forms.
pub fn convertible(a: &Term, b: &Term, fuel: Fuel) -> Conversion {
    let (Ok(na), Ok(nb)) = (normalize(a, fuel), normalize(b, fuel)) else {
        return Conversion::Undecided;
    };
    if alpha_eq(&na, &nb) {
        Conversion::Yes
    } else {
        Conversion::No
    }
}
