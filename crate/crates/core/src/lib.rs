//! Exact verification of bilateral Bailey pair identities in truncated
//! formal Laurent series.

pub mod catalog;
pub mod cli;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod report;
pub mod series;
pub mod special;

pub use error::{Error, Result};
