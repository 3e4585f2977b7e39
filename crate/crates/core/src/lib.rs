//! A Pure Type System kernel.
//!
//! Two presentations of the same typing relation are implemented side by
//! side: the classical system T, which insists on well-formed contexts, and
//! the system T', which types terms in arbitrary contexts. Every successful
//! check produces an explicit [`DerivationTree`] that an independent validator
//! re-checks rule by rule. A T' derivation over a well-formed context can be
//! elaborated into a T derivation, and a T' derivation over any context can be
//! curated: the kernel extracts a well-formed sub-context over which the same
//! judgement holds in T.
//!
//! ```
//! use pts_core::{builtin, parse_context, parse_term, Kernel};
//!
//! let coc = builtin("coc").unwrap();
//! let kernel = Kernel::new(&coc).unwrap();
//! // `z` is declared before `nat`, so this context is not well-formed
//! let ctx = parse_context("z : nat, nat : *").unwrap();
//! let z = parse_term("z").unwrap();
//!
//! assert!(kernel.check_t(&ctx, &z, &parse_term("nat").unwrap()).is_err());
//! let curated = kernel.curate(&ctx, &z).unwrap();
//! assert_eq!(curated.delta.to_string(), "nat : *, z : nat");
//! ```

pub mod cli;
pub mod context;
pub mod kernel;
pub mod reduce;
pub mod spec;
pub mod syntax;
pub mod term;

pub use context::{Context, ContextError, Declaration, WfFailure, WfReport};
pub use kernel::{
    CurationResult, DerivationTree, Judgement, Kernel, Location, RuleName, System, TheoremReport, TypeError,
    TypeErrorKind, Violation,
};
pub use reduce::{convertible, normalize, whnf, Conversion, Fuel, FuelExhausted, DEFAULT_FUEL};
pub use spec::{builtin, builtin_instances, PtsSpec};
pub use syntax::{parse_context, parse_spec, parse_term, print_term, ParseError, Syntax};
pub use term::{alpha_eq, free_vars, fresh_name, substitute, Term, Var};
