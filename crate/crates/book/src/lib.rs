//! The guide's chapters, one module each, so `cargo test --doc` runs every
//! listing in `book/src`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/diagrams.md")]
pub mod diagrams {}
#[doc = include_str!("../../../book/src/hierarchy.md")]
pub mod hierarchy {}
#[doc = include_str!("../../../book/src/aluthge.md")]
pub mod aluthge {}
#[doc = include_str!("../../../book/src/powers.md")]
pub mod powers {}
#[doc = include_str!("../../../book/src/berger.md")]
pub mod berger {}
#[doc = include_str!("../../../book/src/moments.md")]
pub mod moments {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
