//! Compiles the guide in `book/src` so that `cargo test` runs every Rust
//! listing in it as a doc-test. One module per chapter keeps failures easy to
//! trace back to their page.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/terms.md")]
pub mod terms {}
#[doc = include_str!("../../../book/src/systems.md")]
pub mod systems {}
#[doc = include_str!("../../../book/src/reduction.md")]
pub mod reduction {}
#[doc = include_str!("../../../book/src/contexts.md")]
pub mod contexts {}
#[doc = include_str!("../../../book/src/typing.md")]
pub mod typing {}
#[doc = include_str!("../../../book/src/derivations.md")]
pub mod derivations {}
#[doc = include_str!("../../../book/src/curation.md")]
pub mod curation {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
