//! Eigenvector centrality by power iteration.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;

/// Per-vertex dominant-eigenvector scores of the adjacency matrix,
/// entrywise nonnegative and normalized to unit Euclidean norm.
///
/// Iterates `x ← (A + I)x / ‖(A + I)x‖`; the shift leaves the dominant
/// eigenvector of `A` unchanged while keeping its eigenvalue strictly
/// largest in modulus on bipartite graphs, where iterating `A` alone
/// oscillates. Converged when successive iterates differ by less than
/// `tolerance` in max norm. On a disconnected graph the scores converge
/// to the dominant component's eigenvector.
pub fn eigenvector_centrality(
    g: &Graph,
    tolerance: f64,
    max_iterations: usize,
) -> Result<Vec<f64>> {
    if g.num_edges() == 0 {
        return Err(Error::NoEdges);
    }
    let n = g.num_vertices();
    let mut x = vec![1.0 / libm::sqrt(n as f64); n];
    let mut y = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iterations {
        y.copy_from_slice(&x);
        for &(u, v) in g.edges() {
            y[u] += x[v];
            y[v] += x[u];
        }
        let norm = libm::sqrt(y.iter().map(|v| v * v).sum::<f64>());
        residual = 0.0;
        for (yi, xi) in y.iter_mut().zip(x.iter()) {
            *yi /= norm;
            let diff = libm::fabs(*yi - xi);
            if diff > residual {
                residual = diff;
            }
        }
        core::mem::swap(&mut x, &mut y);
        if residual < tolerance {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        residual,
    })
}

/// Index of the largest score; ties go to the lowest vertex index.
pub fn most_central_vertex(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_er, Graph};
    use crate::rng::RngSeed;

    fn centrality(g: &Graph) -> Vec<f64> {
        eigenvector_centrality(g, DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS).unwrap()
    }

    #[test]
    fn star_center_dominates() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let scores = centrality(&g);
        assert_eq!(most_central_vertex(&scores), 0);
        for leaf in 1..4 {
            assert!(scores[0] > scores[leaf]);
            assert!((scores[leaf] - scores[1]).abs() < 1e-9, "leaves symmetric");
        }
    }

    #[test]
    fn path_middle_dominates() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let scores = centrality(&g);
        assert_eq!(most_central_vertex(&scores), 1);
    }

    #[test]
    fn scores_nonnegative_unit_norm() {
        for s in 0..20u64 {
            let g = generate_er(12, 0.3, RngSeed::new(s, 0)).unwrap();
            if g.num_edges() == 0 {
                continue;
            }
            let scores = centrality(&g);
            assert!(scores.iter().all(|&v| v >= 0.0));
            let norm: f64 = scores.iter().map(|v| v * v).sum();
            assert!((norm - 1.0).abs() < 1e-9, "norm² = {norm}");
        }
    }

    #[test]
    fn edgeless_graph_rejected() {
        let g = Graph::new(5).unwrap();
        assert_eq!(
            eigenvector_centrality(&g, 1e-10, 100).unwrap_err(),
            Error::NoEdges
        );
    }

    #[test]
    fn iteration_cap_reported() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        match eigenvector_centrality(&g, 1e-15, 1) {
            Err(Error::NoConvergence {
                iterations: 1,
                residual,
            }) => {
                assert!(residual > 0.0);
            }
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn argmax_invariant_under_relabeling() {
        use rand::seq::SliceRandom;
        let g = generate_er(10, 0.35, RngSeed::new(33, 0)).unwrap();
        let scores = centrality(&g);
        let hub = most_central_vertex(&scores);
        let mut rng = RngSeed::new(7, 7).rng();
        for _ in 0..20 {
            let mut perm: alloc::vec::Vec<usize> = (0..10).collect();
            perm.shuffle(&mut rng);
            let relabeled =
                Graph::from_edges(10, g.edges().iter().map(|&(u, v)| (perm[u], perm[v]))).unwrap();
            let relabeled_scores = centrality(&relabeled);
            assert_eq!(most_central_vertex(&relabeled_scores), perm[hub]);
        }
    }
}
