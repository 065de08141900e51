pub mod baselines;
pub mod error;
pub mod generators;
pub mod golden;
pub mod graph;
pub mod io;
pub mod local;
pub mod oracle;
pub mod qaoa;
pub mod reduction;
pub mod repro;
pub mod treewidth;

pub use error::{Error, Result};
