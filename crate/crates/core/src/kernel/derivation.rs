use std::collections::{BTreeSet, HashSet};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::context::Context;
use crate::term::Term;

/// `Γ ⊢ t : A`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgement {
    pub ctx: Context,
    pub subject: Term,
    pub ty: Term,
}

impl Judgement {
    pub fn new(ctx: Context, subject: Term, ty: Term) -> Self {
        Judgement { ctx, subject, ty }
    }

    /// Same context (up to α on declared types), subject and type up to α.
    pub fn alpha_eq(&self, other: &Judgement) -> bool {
        self.ctx.alpha_eq(&other.ctx) && self.subject.alpha_eq(&other.subject) && self.ty.alpha_eq(&other.ty)
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.is_empty() {
            write!(f, "⊢ {} : {}", self.subject, self.ty)
        } else {
            write!(f, "{} ⊢ {} : {}", self.ctx, self.subject, self.ty)
        }
    }
}

/// The two rule sets share (prod), (abs), (app) and (conv).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum System {
    /// Well-formed contexts: (sort), (start), (weak), (prod), (abs), (app), (conv).
    T,
    /// Arbitrary contexts: (sort'), (var'), (prod), (abs), (app), (conv).
    TPrime,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::T => "T",
            System::TPrime => "T'",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleName {
    Sort,
    Start,
    Weak,
    SortPrime,
    VarPrime,
    Prod,
    Abs,
    App,
    Conv,
}

impl RuleName {
    pub const ALL: [RuleName; 9] = [
        RuleName::Sort,
        RuleName::Start,
        RuleName::Weak,
        RuleName::SortPrime,
        RuleName::VarPrime,
        RuleName::Prod,
        RuleName::Abs,
        RuleName::App,
        RuleName::Conv,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RuleName::Sort => "sort",
            RuleName::Start => "start",
            RuleName::Weak => "weak",
            RuleName::SortPrime => "sort'",
            RuleName::VarPrime => "var'",
            RuleName::Prod => "prod",
            RuleName::Abs => "abs",
            RuleName::App => "app",
            RuleName::Conv => "conv",
        }
    }

    pub fn from_label(label: &str) -> Option<RuleName> {
        RuleName::ALL.into_iter().find(|r| r.label() == label)
    }

    pub fn arity(self) -> usize {
        match self {
            RuleName::Sort | RuleName::SortPrime => 0,
            RuleName::Start | RuleName::VarPrime => 1,
            RuleName::Weak | RuleName::Prod | RuleName::App | RuleName::Conv => 2,
            RuleName::Abs => 3,
        }
    }

    pub fn belongs_to(self, system: System) -> bool {
        match self {
            RuleName::Sort | RuleName::Start | RuleName::Weak => system == System::T,
            RuleName::SortPrime | RuleName::VarPrime => system == System::TPrime,
            RuleName::Prod | RuleName::Abs | RuleName::App | RuleName::Conv => true,
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Side-condition data of a rule instance.
///
/// * `axiom`: the pair `(s1, s2)` consulted by (sort) / (sort').
/// * `rule`: the triple `(s1, s2, s3)` consulted by (prod) / (abs).
/// * `sort`: the `s` in the sorted premise of (var'), (start), (weak), (conv).
/// * `conversion`: the pair `(A, B)` with `A ≡ B` for (conv).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Side {
    pub axiom: Option<(String, String)>,
    pub rule: Option<(String, String, String)>,
    pub sort: Option<String>,
    pub conversion: Option<(Term, Term)>,
}

/// An explicit proof object. Premises are reference counted, so identical
/// sub-derivations may be shared; walkers that care about cost visit each
/// shared node once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTree {
    pub rule: RuleName,
    pub conclusion: Judgement,
    pub side: Side,
    pub premises: Vec<Arc<DerivationTree>>,
}

impl DerivationTree {
    pub fn new(rule: RuleName, conclusion: Judgement, side: Side, premises: Vec<Arc<DerivationTree>>) -> Self {
        DerivationTree {
            rule,
            conclusion,
            side,
            premises,
        }
    }

    pub fn leaf(rule: RuleName, conclusion: Judgement, side: Side) -> Self {
        DerivationTree::new(rule, conclusion, side, Vec::new())
    }

    /// The same derivation with its conclusion type replaced by an
    /// α-equivalent one.
    pub fn with_type(&self, ty: Term) -> DerivationTree {
        let mut out = self.clone();
        out.conclusion.ty = ty;
        out
    }

    /// Number of nodes counted as a tree (shared nodes count once per use).
    pub fn size(&self) -> u64 {
        1 + self.premises.iter().map(|p| p.size()).fold(0u64, u64::saturating_add)
    }

    /// Number of distinct nodes.
    pub fn distinct_nodes(&self) -> usize {
        let mut seen = HashSet::new();
        self.visit_distinct(&mut seen, &mut |_| {});
        seen.len() + 1
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(|p| p.depth()).max().unwrap_or(0)
    }

    pub fn rules_used(&self) -> BTreeSet<RuleName> {
        let mut out = BTreeSet::from([self.rule]);
        let mut seen = HashSet::new();
        self.visit_distinct(&mut seen, &mut |n| {
            out.insert(n.rule);
        });
        out
    }

    fn visit_distinct(&self, seen: &mut HashSet<*const DerivationTree>, f: &mut dyn FnMut(&DerivationTree)) {
        for p in &self.premises {
            if seen.insert(Arc::as_ptr(p)) {
                f(p);
                p.visit_distinct(seen, f);
            }
        }
    }

    /// Indented one-line-per-node rendering.
    pub fn sketch(&self) -> String {
        let mut out = String::new();
        self.sketch_into(&mut out, 0);
        out
    }

    fn sketch_into(&self, out: &mut String, depth: usize) {
        let _ = writeln!(out, "{:indent$}({}) {}", "", self.rule, self.conclusion, indent = depth * 2);
        for p in &self.premises {
            p.sketch_into(out, depth + 1);
        }
    }
}

impl fmt::Display for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sketch())
    }
}
