//! Simple undirected graphs and the collision graph `G_S` of a Sidon seed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridParams, PointSet};
use crate::sidon::is_sidon;

/// Largest vertex count accepted by [`count_independent_sets`].
pub const INDEPENDENT_SET_GUARD: usize = 30;

/// Largest `N·s` (vertex-seed incidences) materialized by
/// [`build_collision_graph`].
pub const COLLISION_INCIDENCE_GUARD: u64 = 1 << 25;

/// Undirected graph on `0..len` with sorted adjacency lists and optional
/// `u64` labels (grid ranks for collision graphs).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    labels: Vec<u64>,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an edge list; loops are rejected and duplicate
    /// edges merged.
    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Graph::with_labels((0..vertices as u64).collect(), edges)
    }

    pub fn with_labels(labels: Vec<u64>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidParameter(format!("edge ({a}, {b}) outside {n} vertices")));
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("loop at vertex {a}")));
            }
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { labels, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, lexicographically ordered.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| (b as usize) > a).map(move |&b| (a, b as usize)))
    }

    /// `e(U)`: number of edges inside the vertex set `u` (indices, no repeats).
    pub fn induced_edge_count(&self, u: &[usize]) -> u64 {
        let mut inside = vec![false; self.vertex_count()];
        for &v in u {
            inside[v] = true;
        }
        let twice: u64 = u.iter().map(|&v| self.adj[v].iter().filter(|&&w| inside[w as usize]).count() as u64).sum();
        twice / 2
    }

    /// Neighborhoods as bitmasks; only for graphs with at most 64 vertices.
    pub(crate) fn masks(&self) -> Vec<u64> {
        debug_assert!(self.vertex_count() <= 64);
        self.adj.iter().map(|list| list.iter().fold(0u64, |m, &w| m | 1 << w)).collect()
    }
}

/// `G_S`: vertices `[n]^d \ S`, with `v₁ ~ v₂` iff `v₁ + b₁ = v₂ + b₂` for
/// some `b₁, b₂ ∈ S`. Vertex labels are grid ranks in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionGraph {
    pub grid: GridParams,
    pub seed: PointSet,
    pub graph: Graph,
}

impl CollisionGraph {
    /// Edges as rank pairs `(r₁, r₂)` with `r₁ < r₂`.
    pub fn rank_edges(&self) -> Vec<(u64, u64)> {
        self.graph.edges().map(|(a, b)| (self.graph.label(a), self.graph.label(b))).collect()
    }

    /// Vertex index of a grid rank, if it is a vertex.
    pub fn vertex_of(&self, rank: u64) -> Option<usize> {
        self.graph.labels().binary_search(&rank).ok()
    }
}

/// Buckets the sums `v + b` by code; vertices sharing a bucket are adjacent.
/// For a Sidon seed every edge arises from exactly one bucket.
pub fn build_collision_graph(seed: &PointSet) -> Result<CollisionGraph> {
    if !is_sidon(seed).verdict {
        return Err(Error::NotSidon);
    }
    let grid = seed.grid();
    let vertices = seed.complement();
    let incidences = vertices.len() as u64 * seed.len() as u64;
    if incidences > COLLISION_INCIDENCE_GUARD {
        return Err(Error::TooLarge(format!(
            "collision graph too large: {grid} with |S|={} needs {incidences} incidences (guard {COLLISION_INCIDENCE_GUARD})",
            seed.len()
        )));
    }
    let seed_codes: Vec<u64> = seed.ranks().iter().map(|&b| grid.embed(b)).collect();
    let mut buckets: Vec<(u64, u32)> = Vec::with_capacity(incidences as usize);
    for (i, &v) in vertices.ranks().iter().enumerate() {
        let cv = grid.embed(v);
        buckets.extend(seed_codes.iter().map(|&cb| (cv + cb, i as u32)));
    }
    buckets.sort_unstable();
    let mut edges = Vec::new();
    for group in buckets.chunk_by(|x, y| x.0 == y.0) {
        for (i, &(_, a)) in group.iter().enumerate() {
            for &(_, b) in &group[i + 1..] {
                edges.push((a as usize, b as usize));
            }
        }
    }
    let graph = Graph::with_labels(vertices.ranks().to_vec(), &edges)?;
    Ok(CollisionGraph { grid, seed: seed.clone(), graph })
}

/// Exact number of independent sets of size `k`, by branching on the lowest
/// remaining vertex.
pub fn count_independent_sets(g: &Graph, k: usize) -> Result<u128> {
    let n = g.vertex_count();
    if n > INDEPENDENT_SET_GUARD {
        return Err(Error::TooLarge(format!(
            "too large for exact independent-set count: need at most {INDEPENDENT_SET_GUARD} vertices, got {n}"
        )));
    }
    fn count(masks: &[u64], cand: u64, k: usize) -> u128 {
        if k == 0 {
            return 1;
        }
        if (cand.count_ones() as usize) < k {
            return 0;
        }
        let v = cand.trailing_zeros() as usize;
        let rest = cand & !(1 << v);
        count(masks, rest & !masks[v], k - 1) + count(masks, rest, k)
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(count(&g.masks(), all, k))
}
