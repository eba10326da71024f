//! Graphs, edge vectors, and random-graph generators.
//!
//! An undirected simple graph on `n` vertices is interchangeable with a flat
//! bit sequence of length `N = n(n−1)/2`: bit `i` records the presence of the
//! `i`-th vertex pair in row-major order over the strict upper triangle of the
//! adjacency matrix — `(0,1), (0,2), …, (0,n−1), (1,2), …`. The mapping is a
//! bijection, so [`vectorize`] and [`devectorize`] invert each other exactly.

use alloc::vec::Vec;

use rand::distributions::{Bernoulli, Distribution};
use rand::Rng;

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// Number of unordered vertex pairs on `num_vertices` vertices.
pub fn pair_count(num_vertices: usize) -> usize {
    num_vertices * (num_vertices - 1) / 2
}

/// Canonical index of the pair `{u, v}` (row-major strict upper triangle).
///
/// Endpoints may be given in either order but must be distinct and in range;
/// callers validate, this only debug-asserts.
pub fn pair_index(num_vertices: usize, u: usize, v: usize) -> usize {
    debug_assert!(u != v && u < num_vertices && v < num_vertices);
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * num_vertices - a * (a + 1) / 2 + b - a - 1
}

/// Vertex count whose pair count equals `len`, if one exists.
pub fn vertex_count_for(len: usize) -> Option<usize> {
    if len == 0 {
        return Some(1);
    }
    let mut n = (libm::sqrt(2.0 * len as f64) as usize).max(2);
    while pair_count(n) > len {
        n -= 1;
    }
    while pair_count(n) < len {
        n += 1;
    }
    (pair_count(n) == len).then_some(n)
}

/// Undirected simple graph: no self-loops, each pair stored once as `(u, v)`
/// with `u < v`, edge list kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Empty graph on `num_vertices` vertices.
    pub fn new(num_vertices: usize) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::TooFewVertices {
                num_vertices,
                min: 1,
            });
        }
        Ok(Graph {
            num_vertices,
            edges: Vec::new(),
        })
    }

    /// Build from arbitrary endpoint pairs; normalizes order, sorts, dedups.
    pub fn from_edges<I>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(num_vertices)?;
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            list.push(normalize_edge(num_vertices, u, v)?);
        }
        list.sort_unstable();
        list.dedup();
        g.edges = list;
        Ok(g)
    }

    /// Internal fast path: `edges` must already be normalized, sorted, unique.
    pub(crate) fn from_sorted_edges_unchecked(
        num_vertices: usize,
        edges: Vec<(usize, usize)>,
    ) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| u < v && v < num_vertices));
        Graph {
            num_vertices,
            edges,
        }
    }

    /// Insert one edge; inserting an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let e = normalize_edge(self.num_vertices, u, v)?;
        if let Err(pos) = self.edges.binary_search(&e) {
            self.edges.insert(pos, e);
        }
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match normalize_edge(self.num_vertices, u, v) {
            Ok(e) => self.edges.binary_search(&e).is_ok(),
            Err(_) => false,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Sorted slice of `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| u == vertex || v == vertex)
            .count()
    }

    /// `N = n(n−1)/2` for this graph's vertex count.
    pub fn pair_count(&self) -> usize {
        pair_count(self.num_vertices)
    }
}

fn normalize_edge(num_vertices: usize, u: usize, v: usize) -> Result<(usize, usize)> {
    if u == v {
        return Err(Error::SelfLoop { vertex: u });
    }
    for &w in &[u, v] {
        if w >= num_vertices {
            return Err(Error::InvalidVertex {
                vertex: w,
                num_vertices,
            });
        }
    }
    Ok(if u < v { (u, v) } else { (v, u) })
}

/// Flat bit representation of a graph: bit `i` is the `i`-th canonical pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeVector {
    num_vertices: usize,
    bits: BitVec,
}

impl EdgeVector {
    /// Wrap raw bits; fails unless `bits.len() == n(n−1)/2`.
    pub fn from_bits(num_vertices: usize, bits: BitVec) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::TooFewVertices {
                num_vertices,
                min: 1,
            });
        }
        let expected = pair_count(num_vertices);
        if bits.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: bits.len(),
            });
        }
        Ok(EdgeVector { num_vertices, bits })
    }

    pub fn zeros(num_vertices: usize) -> Result<Self> {
        Self::from_bits(num_vertices, BitVec::zeros(pair_count(num_vertices)))
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// `N`, the pair count.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits.get(index)
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.bits.set(index, value);
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }
}

/// Graph → edge vector, the canonical one-to-one flattening.
pub fn vectorize(g: &Graph) -> EdgeVector {
    let mut bits = BitVec::zeros(g.pair_count());
    for &(u, v) in g.edges() {
        bits.set(pair_index(g.num_vertices(), u, v), true);
    }
    EdgeVector {
        num_vertices: g.num_vertices(),
        bits,
    }
}

/// Edge vector → graph, the exact inverse of [`vectorize`].
pub fn devectorize(v: &EdgeVector) -> Graph {
    let n = v.num_vertices();
    let mut edges = Vec::with_capacity(v.count_ones());
    let mut index = 0;
    for u in 0..n {
        for w in (u + 1)..n {
            if v.get(index) {
                edges.push((u, w));
            }
            index += 1;
        }
    }
    Graph::from_sorted_edges_unchecked(n, edges)
}

/// Random-graph families used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphModel {
    /// Each pair present independently with probability `edge_prob`.
    ErdosRenyi { edge_prob: f64 },
    /// Preferential attachment, `attach` edges per new vertex.
    BarabasiAlbert { attach: usize },
}

impl GraphModel {
    pub fn generate(&self, num_vertices: usize, seed: RngSeed) -> Result<Graph> {
        match *self {
            GraphModel::ErdosRenyi { edge_prob } => generate_er(num_vertices, edge_prob, seed),
            GraphModel::BarabasiAlbert { attach } => generate_ba(num_vertices, attach, seed),
        }
    }
}

/// Erdős–Rényi G(n, p): every pair included independently with probability `p`.
///
/// Draws follow canonical pair order, one Bernoulli draw per pair.
pub fn generate_er(num_vertices: usize, edge_prob: f64, seed: RngSeed) -> Result<Graph> {
    if num_vertices < 2 {
        return Err(Error::TooFewVertices {
            num_vertices,
            min: 2,
        });
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::OutOfRange {
            name: "edge_prob",
            value: edge_prob,
            range: "[0, 1]",
        });
    }
    let mut rng = seed.rng();
    let dist = Bernoulli::new(edge_prob).expect("validated probability");
    let mut edges = Vec::new();
    for u in 0..num_vertices {
        for v in (u + 1)..num_vertices {
            if dist.sample(&mut rng) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_sorted_edges_unchecked(num_vertices, edges))
}

/// Barabási–Albert preferential attachment.
///
/// Seeded with a star on `attach + 1` vertices (vertex 0 the hub), then each
/// new vertex connects to `attach` distinct existing vertices drawn with
/// probability proportional to current degree.
pub fn generate_ba(num_vertices: usize, attach: usize, seed: RngSeed) -> Result<Graph> {
    if attach == 0 {
        return Err(Error::OutOfRange {
            name: "attach",
            value: 0.0,
            range: "[1, n)",
        });
    }
    if attach >= num_vertices {
        return Err(Error::AttachmentExceedsVertices {
            attach,
            num_vertices,
        });
    }
    let mut rng = seed.rng();
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(attach * (num_vertices - attach));
    // Degree-proportional pool: one entry per unit of degree.
    let mut pool: Vec<usize> = Vec::with_capacity(2 * attach * num_vertices);
    for leaf in 1..=attach {
        edges.push((0, leaf));
        pool.push(0);
        pool.push(leaf);
    }
    let mut targets: Vec<usize> = Vec::with_capacity(attach);
    for v in (attach + 1)..num_vertices {
        targets.clear();
        while targets.len() < attach {
            let candidate = pool[rng.gen_range(0..pool.len())];
            if !targets.contains(&candidate) {
                targets.push(candidate);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            pool.push(t);
            pool.push(v);
        }
    }
    Graph::from_edges(num_vertices, edges)
}
