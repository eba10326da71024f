//! Hardening graph transmission against adversarial edge perturbations.
//!
//! A sender vectorizes a graph's adjacency into a flat bit sequence, transmits
//! `K` copies of it, and deliberately flips each transmitted bit with a small
//! probability so the repetitive structure is concealed from an attacker on the
//! channel. The receiver recovers the graph by per-bit majority vote across the
//! copies. This crate contains the whole algorithmic pipeline:
//!
//! * [`graph`] — graph/edge-vector representations, canonical vectorization,
//!   Erdős–Rényi and Barabási–Albert generators, eigenvector centrality;
//! * [`codec`] — the repetition encoder with sender-assigned noise and the
//!   majority-vote decoder;
//! * [`adversary`] — channel attack models (i.i.d. bit flips and targeted
//!   disconnection of the most central vertex);
//! * [`analysis`] — closed-form decoding success probabilities, their
//!   split-sample estimators, concentration-based repetition bounds, and the
//!   line search for the smallest adequate copy count;
//! * [`empirics`] — Gaussian KDE, right-closed ECDF, and quantiles over
//!   observed reconstruction errors.
//!
//! Everything is deterministic given an [`RngSeed`]; values are immutable after
//! construction and safe to share across threads. The crate is `no_std`
//! compatible (with `alloc`); the default `std` feature only adds
//! `std::error::Error` plumbing.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod adversary;
pub mod analysis;
pub mod bits;
pub mod centrality;
pub mod codec;
pub mod empirics;
pub mod error;
pub mod graph;
pub mod rng;

pub use adversary::AttackSpec;
pub use analysis::{DecodeReport, RobustnessParams};
pub use bits::BitVec;
pub use codec::{NoiseSpec, Transmission};
pub use empirics::ErrorSample;
pub use error::{Error, Result};
pub use graph::{EdgeVector, Graph, GraphModel};
pub use rng::{RngSeed, StreamRole};
