//! The guide in `book/src`, compiled so that its Rust samples run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/diagrams.md")]
pub mod diagrams {}

#[doc = include_str!("../../../book/src/cube.md")]
pub mod cube {}

#[doc = include_str!("../../../book/src/complexes.md")]
pub mod complexes {}

#[doc = include_str!("../../../book/src/homology.md")]
pub mod homology {}

#[doc = include_str!("../../../book/src/invariants.md")]
pub mod invariants {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
