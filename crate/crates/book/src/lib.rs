//! The guide under `book/src`, compiled as doc-tests so its snippets stay
//! in step with the library. One module per chapter keeps failures easy
//! to trace back.

#[doc = include_str!("../../../book/src/index.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/angles.md")]
pub mod angles {}

#[doc = include_str!("../../../book/src/lightcone.md")]
pub mod lightcone {}

#[doc = include_str!("../../../book/src/baselines.md")]
pub mod baselines {}

#[doc = include_str!("../../../book/src/reduction.md")]
pub mod reduction {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
