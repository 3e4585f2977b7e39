//! The typing engine.
//!
//! [`Kernel`] pairs a validated [`PtsSpec`] with a reduction budget and exposes
//! inference in the arbitrary-context system T', checking in the classical
//! system T, elaboration of T' derivations into T derivations over
//! well-formed contexts, context curation, and an independent derivation
//! validator.

mod curate;
mod derivation;
mod elaborate;
mod error;
mod infer;
pub mod json;
mod validate;

pub use curate::{CurationResult, TheoremEvidence, TheoremReport};
pub use derivation::{DerivationTree, Judgement, RuleName, Side, System};
pub use error::{Location, Origin, Step, TypeError, TypeErrorKind};
pub use validate::Violation;

use crate::reduce::Fuel;
use crate::spec::{InvalidSpec, PtsSpec};

#[derive(Clone, Copy, Debug)]
pub struct Kernel<'s> {
    spec: &'s PtsSpec,
    fuel: Fuel,
}

impl<'s> Kernel<'s> {
    /// Rejects specs whose axioms or rules are not functional.
    pub fn new(spec: &'s PtsSpec) -> Result<Self, InvalidSpec> {
        let violations = spec.validate();
        if !violations.is_empty() {
            return Err(InvalidSpec {
                name: spec.name().to_string(),
                violations,
            });
        }
        Ok(Kernel {
            spec,
            fuel: Fuel::default(),
        })
    }

    pub fn with_fuel(mut self, fuel: Fuel) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn spec(&self) -> &'s PtsSpec {
        self.spec
    }

    pub fn fuel(&self) -> Fuel {
        self.fuel
    }
}
