//! Error type shared by all modules.

use core::fmt;

/// Everything that can go wrong when building or running the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric parameter fell outside its documented range.
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    /// Vertex index not in `[0, num_vertices)`.
    InvalidVertex { vertex: usize, num_vertices: usize },
    /// Edge endpoints coincide.
    SelfLoop { vertex: usize },
    /// A bit sequence had the wrong length for its declared shape.
    LengthMismatch { expected: usize, actual: usize },
    /// Copy count must be even and at least 2.
    InvalidCopyCount { k_copies: usize },
    /// Too few vertices for the requested operation.
    TooFewVertices { num_vertices: usize, min: usize },
    /// Preferential attachment needs strictly more vertices than edges per step.
    AttachmentExceedsVertices { attach: usize, num_vertices: usize },
    /// Centrality is undefined on an edgeless graph.
    NoEdges,
    /// Power iteration did not converge within the iteration cap.
    NoConvergence { iterations: usize, residual: f64 },
    /// Block count of a transmission does not match the vertex count's pair count.
    ShapeMismatch { blocks: usize, num_vertices: usize },
    /// An operation that needs observations received none.
    EmptySample,
    /// Estimated flip probability reached 0.5; majority decoding cannot succeed.
    UnreliableChannel { mu_hat: f64 },
    /// Line search exceeded its copy-count cap without meeting the target.
    SearchExhausted { limit: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange { name, value, range } => {
                write!(f, "{name} = {value} outside {range}")
            }
            Error::InvalidVertex {
                vertex,
                num_vertices,
            } => {
                write!(
                    f,
                    "vertex {vertex} out of range for {num_vertices} vertices"
                )
            }
            Error::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Error::LengthMismatch { expected, actual } => {
                write!(f, "length mismatch: expected {expected}, got {actual}")
            }
            Error::InvalidCopyCount { k_copies } => {
                write!(f, "copy count {k_copies} must be even and >= 2")
            }
            Error::TooFewVertices { num_vertices, min } => {
                write!(f, "{num_vertices} vertices given, need at least {min}")
            }
            Error::AttachmentExceedsVertices {
                attach,
                num_vertices,
            } => {
                write!(
                    f,
                    "attachment count {attach} must be smaller than vertex count {num_vertices}"
                )
            }
            Error::NoEdges => write!(f, "graph has no edges; centrality undefined"),
            Error::NoConvergence {
                iterations,
                residual,
            } => {
                write!(
                    f,
                    "no convergence after {iterations} iterations (residual {residual:e})"
                )
            }
            Error::ShapeMismatch {
                blocks,
                num_vertices,
            } => {
                write!(
                    f,
                    "{blocks} blocks inconsistent with {num_vertices} vertices"
                )
            }
            Error::EmptySample => write!(f, "empty sample"),
            Error::UnreliableChannel { mu_hat } => {
                write!(f, "estimated flip probability {mu_hat} >= 0.5; decoding cannot succeed for majority flip rates")
            }
            Error::SearchExhausted { limit } => {
                write!(f, "line search exhausted at copy count {limit}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
