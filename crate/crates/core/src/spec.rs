//! Functional PTS instances `(S, A, R)` and the built-in lambda-cube gallery.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Conventional sort names used by the built-in instances.
pub const STAR: &str = "*";
pub const BOX: &str = "BOX";

/// Names of the built-in instances, in listing order.
pub const BUILTIN_NAMES: [&str; 6] = ["stlc", "systemF", "fomega", "lambdaP", "coc", "type_in_type"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtsSpec {
    name: String,
    sorts: BTreeSet<String>,
    axioms: Vec<(String, String)>,
    rules: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecViolation {
    UndeclaredSort { sort: String, used_in: String },
    DuplicateAxiom { sort: String, targets: Vec<String> },
    DuplicateRule { sorts: (String, String), targets: Vec<String> },
}

impl fmt::Display for SpecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecViolation::UndeclaredSort { sort, used_in } => {
                write!(f, "sort `{sort}` is used in {used_in} but not declared")
            }
            SpecViolation::DuplicateAxiom { sort, targets } => write!(
                f,
                "axioms are not functional: `{sort}` has types {}",
                targets.join(", ")
            ),
            SpecViolation::DuplicateRule { sorts, targets } => write!(
                f,
                "rules are not functional: ({}, {}) yields {}",
                sorts.0,
                sorts.1,
                targets.join(", ")
            ),
        }
    }
}

/// A spec that failed validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid PTS spec `{name}`: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidSpec {
    pub name: String,
    pub violations: Vec<SpecViolation>,
}

impl PtsSpec {
    pub fn new(name: impl Into<String>) -> Self {
        PtsSpec {
            name: name.into(),
            sorts: BTreeSet::new(),
            axioms: Vec::new(),
            rules: Vec::new(),
        }
    }

    pub fn with_sort(mut self, s: impl Into<String>) -> Self {
        self.add_sort(s);
        self
    }

    pub fn with_axiom(mut self, s1: impl Into<String>, s2: impl Into<String>) -> Self {
        self.add_axiom(s1, s2);
        self
    }

    pub fn with_rule(mut self, s1: impl Into<String>, s2: impl Into<String>, s3: impl Into<String>) -> Self {
        self.add_rule(s1, s2, s3);
        self
    }

    pub fn add_sort(&mut self, s: impl Into<String>) {
        self.sorts.insert(s.into());
    }

    pub fn add_axiom(&mut self, s1: impl Into<String>, s2: impl Into<String>) {
        let axiom = (s1.into(), s2.into());
        if !self.axioms.contains(&axiom) {
            self.axioms.push(axiom);
        }
    }

    pub fn add_rule(&mut self, s1: impl Into<String>, s2: impl Into<String>, s3: impl Into<String>) {
        let rule = (s1.into(), s2.into(), s3.into());
        if !self.rules.contains(&rule) {
            self.rules.push(rule);
        }
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sorts(&self) -> &BTreeSet<String> {
        &self.sorts
    }

    pub fn axioms(&self) -> &[(String, String)] {
        &self.axioms
    }

    pub fn rules(&self) -> &[(String, String, String)] {
        &self.rules
    }

    pub fn has_sort(&self, s: &str) -> bool {
        self.sorts.contains(s)
    }

    pub fn has_axiom(&self, s1: &str, s2: &str) -> bool {
        self.axioms.iter().any(|(a, b)| a == s1 && b == s2)
    }

    pub fn has_rule(&self, s1: &str, s2: &str, s3: &str) -> bool {
        self.rules.iter().any(|(a, b, c)| a == s1 && b == s2 && c == s3)
    }

    /// The `s2` with `(s1, s2)` an axiom.
    pub fn axiom_sort(&self, s1: &str) -> Result<Option<&str>, SpecError> {
        if !self.has_sort(s1) {
            return Err(SpecError::UnknownSort(s1.to_string()));
        }
        Ok(self
            .axioms
            .iter()
            .find(|(a, _)| a == s1)
            .map(|(_, b)| b.as_str()))
    }

    /// The `s3` with `(s1, s2, s3)` a rule.
    pub fn rule_sort(&self, s1: &str, s2: &str) -> Result<Option<&str>, SpecError> {
        for s in [s1, s2] {
            if !self.has_sort(s) {
                return Err(SpecError::UnknownSort(s.to_string()));
            }
        }
        Ok(self
            .rules
            .iter()
            .find(|(a, b, _)| a == s1 && b == s2)
            .map(|(_, _, c)| c.as_str()))
    }

    /// Every violation of sort declaration and functionality. Empty means valid.
    pub fn validate(&self) -> Vec<SpecViolation> {
        let mut out = Vec::new();
        let undeclared = |s: &String, used_in: String, out: &mut Vec<SpecViolation>| {
            if !self.sorts.contains(s) {
                out.push(SpecViolation::UndeclaredSort {
                    sort: s.clone(),
                    used_in,
                });
            }
        };
        for (s1, s2) in &self.axioms {
            let at = format!("axiom {s1} : {s2}");
            undeclared(s1, at.clone(), &mut out);
            undeclared(s2, at, &mut out);
        }
        for (s1, s2, s3) in &self.rules {
            let at = format!("rule ({s1}, {s2}) : {s3}");
            undeclared(s1, at.clone(), &mut out);
            undeclared(s2, at.clone(), &mut out);
            undeclared(s3, at, &mut out);
        }

        let mut axiom_targets: BTreeMap<&str, Vec<String>> = BTreeMap::new();
        for (s1, s2) in &self.axioms {
            axiom_targets.entry(s1).or_default().push(s2.clone());
        }
        for (sort, targets) in axiom_targets {
            if targets.len() > 1 {
                out.push(SpecViolation::DuplicateAxiom {
                    sort: sort.to_string(),
                    targets,
                });
            }
        }

        let mut rule_targets: BTreeMap<(&str, &str), Vec<String>> = BTreeMap::new();
        for (s1, s2, s3) in &self.rules {
            rule_targets.entry((s1, s2)).or_default().push(s3.clone());
        }
        for ((s1, s2), targets) in rule_targets {
            if targets.len() > 1 {
                out.push(SpecViolation::DuplicateRule {
                    sorts: (s1.to_string(), s2.to_string()),
                    targets,
                });
            }
        }
        out
    }

    pub fn validated(self) -> Result<Self, InvalidSpec> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(InvalidSpec {
                name: self.name,
                violations,
            })
        }
    }

    /// Same sorts, axioms and rules, ignoring names and declaration order.
    pub fn same_system(&self, other: &PtsSpec) -> bool {
        let axioms = |s: &PtsSpec| s.axioms.iter().cloned().collect::<BTreeSet<_>>();
        let rules = |s: &PtsSpec| s.rules.iter().cloned().collect::<BTreeSet<_>>();
        self.sorts == other.sorts && axioms(self) == axioms(other) && rules(self) == rules(other)
    }
}

impl fmt::Display for PtsSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "name {}", self.name)?;
        for s in &self.sorts {
            writeln!(f, "sort {s}")?;
        }
        for (s1, s2) in &self.axioms {
            writeln!(f, "axiom {s1} : {s2}")?;
        }
        for (s1, s2, s3) in &self.rules {
            writeln!(f, "rule ({s1}, {s2}) : {s3}")?;
        }
        Ok(())
    }
}

fn cube(name: &str, rules: &[(&str, &str)]) -> PtsSpec {
    let mut spec = PtsSpec::new(name).with_sort(STAR).with_sort(BOX).with_axiom(STAR, BOX);
    for (s1, s2) in rules {
        spec.add_rule(*s1, *s2, *s2);
    }
    spec
}

/// A built-in instance by name.
pub fn builtin(name: &str) -> Option<PtsSpec> {
    let spec = match name {
        "stlc" => cube(name, &[(STAR, STAR)]),
        "systemF" => cube(name, &[(STAR, STAR), (BOX, STAR)]),
        "fomega" => cube(name, &[(STAR, STAR), (BOX, STAR), (BOX, BOX)]),
        "lambdaP" => cube(name, &[(STAR, STAR), (STAR, BOX)]),
        "coc" => cube(name, &[(STAR, STAR), (BOX, STAR), (BOX, BOX), (STAR, BOX)]),
        "type_in_type" => PtsSpec::new(name)
            .with_sort(STAR)
            .with_axiom(STAR, STAR)
            .with_rule(STAR, STAR, STAR),
        _ => return None,
    };
    Some(spec)
}

pub fn builtin_instances() -> BTreeMap<String, PtsSpec> {
    BUILTIN_NAMES
        .iter()
        .map(|n| (n.to_string(), builtin(n).expect("listed builtin")))
        .collect()
}
