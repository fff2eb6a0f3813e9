//! Guide chapters, compiled here so their snippets run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/constellations.md")]
pub mod constellations {}
#[doc = include_str!("../../../book/src/signal.md")]
pub mod signal {}
#[doc = include_str!("../../../book/src/filter.md")]
pub mod filter {}
#[doc = include_str!("../../../book/src/strategies.md")]
pub mod strategies {}
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
