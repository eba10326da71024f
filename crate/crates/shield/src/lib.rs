//! IO, CLI, and experiment harness around [`graphshield_core`].
//!
//! The core crate holds the pure pipeline (vectorize → encode → attack →
//! decode → analyze); this crate adds the file formats, the seeded parallel
//! Monte Carlo runner behind `simulate`, and the `graphshield` binary.

pub mod cli;
pub mod error;
pub mod formats;
pub mod harness;

pub use error::{Error, Result};
