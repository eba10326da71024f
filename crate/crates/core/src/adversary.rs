//! Channel attack models.
//!
//! The attacker sees the `K` sender-perturbed copies, not the original graph,
//! so the targeted attack recomputes eigenvector centrality per received copy
//! and disconnects that copy's most central vertex. Random flips hit every
//! transmitted bit independently with probability `β < 0.5` — anything larger
//! would be easy to detect.

use rand::distributions::{Bernoulli, Distribution};

use crate::centrality::{
    eigenvector_centrality, most_central_vertex, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE,
};
use crate::codec::Transmission;
use crate::error::{Error, Result};
use crate::graph::{devectorize, pair_count, pair_index, EdgeVector};
use crate::rng::RngSeed;

/// Attacker configuration: flip probability, whether to disconnect the most
/// central vertex, and in which order the two passes run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackSpec {
    beta: f64,
    targeted: bool,
    targeted_first: bool,
}

impl AttackSpec {
    /// Targeted pass (if any) runs before the random flips.
    pub fn new(beta: f64, targeted: bool) -> Result<Self> {
        if !(0.0..0.5).contains(&beta) {
            return Err(Error::OutOfRange {
                name: "beta",
                value: beta,
                range: "[0, 0.5)",
            });
        }
        Ok(AttackSpec {
            beta,
            targeted,
            targeted_first: true,
        })
    }

    /// Flip the pass order: random flips first, then the targeted pass.
    pub fn with_random_first(mut self) -> Self {
        self.targeted_first = false;
        self
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn targeted(&self) -> bool {
        self.targeted
    }

    pub fn targeted_first(&self) -> bool {
        self.targeted_first
    }
}

/// XOR every transmitted bit with an independent Bernoulli(`β`) draw.
/// Draws follow storage order, so equal seeds produce equal masks and the
/// attack is an involution per seed.
pub fn attack_random(r: &Transmission, beta: f64, seed: RngSeed) -> Result<Transmission> {
    if !(0.0..0.5).contains(&beta) {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
            range: "[0, 0.5)",
        });
    }
    let mut out = r.clone();
    let mut rng = seed.rng();
    let dist = Bernoulli::new(beta).expect("validated probability");
    let total = r.num_blocks() * r.num_copies();
    for i in 0..total {
        if dist.sample(&mut rng) {
            out.flip_raw(i);
        }
    }
    Ok(out)
}

/// Disconnect each copy's most central vertex.
///
/// Per copy: rebuild the copy's graph, find the eigenvector-centrality
/// argmax (ties to the lowest index), and zero every bit whose pair touches
/// it. An edgeless copy has no defined centrality and passes through
/// unchanged.
pub fn attack_targeted(r: &Transmission, num_vertices: usize) -> Result<Transmission> {
    if num_vertices < 2 || pair_count(num_vertices) != r.num_blocks() {
        return Err(Error::ShapeMismatch {
            blocks: r.num_blocks(),
            num_vertices,
        });
    }
    let mut out = r.clone();
    for copy in 0..r.num_copies() {
        let view =
            EdgeVector::from_bits(num_vertices, out.copy_bits(copy)).expect("shape checked above");
        let graph = devectorize(&view);
        if graph.num_edges() == 0 {
            continue;
        }
        let scores = eigenvector_centrality(&graph, DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS)?;
        let hub = most_central_vertex(&scores);
        for other in 0..num_vertices {
            if other != hub {
                out.set(pair_index(num_vertices, hub, other), copy, false);
            }
        }
    }
    Ok(out)
}

/// The full attack: targeted disconnection and random flips, composed in
/// the order `spec.targeted_first` selects (default: targeted pass first).
pub fn attack_composite(
    r: &Transmission,
    spec: &AttackSpec,
    num_vertices: usize,
    seed: RngSeed,
) -> Result<Transmission> {
    let run_targeted = |t: &Transmission| -> Result<Transmission> {
        if spec.targeted() {
            attack_targeted(t, num_vertices)
        } else {
            Ok(t.clone())
        }
    };
    if spec.targeted_first() {
        let t = run_targeted(r)?;
        attack_random(&t, spec.beta(), seed)
    } else {
        let t = attack_random(r, spec.beta(), seed)?;
        run_targeted(&t)
    }
}
