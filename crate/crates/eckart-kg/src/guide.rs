//! The book chapters, included as doc comments so every fenced code snippet
//! in the guide runs under `cargo test --doc` and cannot drift from the API.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/problem.md")]
pub mod problem {}
#[doc = include_str!("../../../book/src/superpotential.md")]
pub mod superpotential {}
#[doc = include_str!("../../../book/src/conventions.md")]
pub mod conventions {}
#[doc = include_str!("../../../book/src/ladder.md")]
pub mod ladder {}
#[doc = include_str!("../../../book/src/spectrum.md")]
pub mod spectrum {}
#[doc = include_str!("../../../book/src/wavefunctions.md")]
pub mod wavefunctions {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
