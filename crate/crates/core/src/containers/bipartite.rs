//! The auxiliary bipartite graph `B` between sums `w` and vertices `u ∈ U`,
//! with `w ~ u` iff `w = u + b` for some `b ∈ S`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::grid::PointSet;
use crate::sidon::is_sidon;

use super::graph::build_collision_graph;

/// Bipartite graph with a sum side `W` (indexed `0..w_count`) and a vertex
/// side `U`. Adjacency is stored from `U` to `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    /// Sum codes of `W` in increasing order (empty for hand-built graphs).
    pub sum_codes: Vec<u64>,
    /// Labels of `U` (grid ranks when built from a seed).
    pub u_labels: Vec<u64>,
    w_count: usize,
    u_adj: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    /// Hand-built graph from `(u, w)` incidences.
    pub fn from_edges(u_count: usize, w_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut u_adj = vec![Vec::new(); u_count];
        for &(u, w) in edges {
            if u >= u_count || w >= w_count {
                return Err(Error::InvalidParameter(format!("edge ({u}, {w}) outside {u_count}x{w_count}")));
            }
            u_adj[u].push(w as u32);
        }
        for list in &mut u_adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(BipartiteGraph { sum_codes: Vec::new(), u_labels: (0..u_count as u64).collect(), w_count, u_adj })
    }

    pub fn u_count(&self) -> usize {
        self.u_adj.len()
    }

    pub fn w_count(&self) -> usize {
        self.w_count
    }

    pub fn edge_count(&self) -> usize {
        self.u_adj.iter().map(Vec::len).sum()
    }

    pub fn u_degree(&self, u: usize) -> usize {
        self.u_adj[u].len()
    }

    pub fn u_neighbors(&self, u: usize) -> &[u32] {
        &self.u_adj[u]
    }

    pub fn w_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.w_count];
        for list in &self.u_adj {
            for &w in list {
                deg[w as usize] += 1;
            }
        }
        deg
    }

    /// `W`-side adjacency lists.
    pub fn w_neighbors(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.w_count];
        for (u, list) in self.u_adj.iter().enumerate() {
            for &w in list {
                adj[w as usize].push(u as u32);
            }
        }
        adj
    }
}

fn check_seed_and_u(u: &PointSet, seed: &PointSet) -> Result<()> {
    if u.grid() != seed.grid() {
        return Err(Error::GridMismatch);
    }
    if !is_sidon(seed).verdict {
        return Err(Error::NotSidon);
    }
    if !u.is_disjoint(seed) {
        return Err(Error::InvalidParameter("U must avoid the seed S".into()));
    }
    Ok(())
}

/// `B` for a vertex set `U ⊆ [n]^d \ S`; only sums with at least one
/// neighbor are materialized on the `W` side.
pub fn build_bipartite_b(u: &PointSet, seed: &PointSet) -> Result<BipartiteGraph> {
    check_seed_and_u(u, seed)?;
    Ok(bipartite_unchecked(u, seed))
}

/// `B` without the Sidon and disjointness checks, for studying what breaks
/// when the seed is not Sidon.
pub fn bipartite_unchecked(u: &PointSet, seed: &PointSet) -> BipartiteGraph {
    let grid = seed.grid();
    let seed_codes: Vec<u64> = seed.ranks().iter().map(|&b| grid.embed(b)).collect();
    let incidences: Vec<Vec<u64>> = u
        .ranks()
        .iter()
        .map(|&v| {
            let cv = grid.embed(v);
            seed_codes.iter().map(|&cb| cv + cb).collect()
        })
        .collect();
    let mut sum_codes: Vec<u64> = incidences.iter().flatten().copied().collect();
    sum_codes.sort_unstable();
    sum_codes.dedup();
    let u_adj = incidences
        .into_iter()
        .map(|codes| {
            let mut list: Vec<u32> =
                codes.iter().map(|c| sum_codes.binary_search(c).expect("code present") as u32).collect();
            list.sort_unstable();
            list
        })
        .collect();
    BipartiteGraph { w_count: sum_codes.len(), sum_codes, u_labels: u.ranks().to_vec(), u_adj }
}

/// True iff no two `U` vertices share two distinct `W` neighbors.
pub fn check_four_cycle_free(b: &BipartiteGraph) -> bool {
    let mut seen = HashSet::new();
    for list in b.w_neighbors() {
        for (i, &u1) in list.iter().enumerate() {
            for &u2 in &list[i + 1..] {
                if !seen.insert((u1, u2)) {
                    return false;
                }
            }
        }
    }
    true
}

/// `(e(U), Σ_w C(deg_B(w), 2))`: the first from the collision graph, the
/// second from `B` alone. Equal whenever `S` is Sidon.
pub fn edge_count_identity(u: &PointSet, seed: &PointSet) -> Result<(u64, u64)> {
    check_seed_and_u(u, seed)?;
    let cg = build_collision_graph(seed)?;
    let idx: Vec<usize> = u.ranks().iter().map(|&r| cg.vertex_of(r).expect("U avoids S")).collect();
    let e_u = cg.graph.induced_edge_count(&idx);
    let b = bipartite_unchecked(u, seed);
    let degree_sum = b.w_degrees().iter().map(|&k| (k * k.saturating_sub(1) / 2) as u64).sum();
    Ok((e_u, degree_sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridParams;

    fn set(n: u64, d: u32, ranks: &[u64]) -> PointSet {
        PointSet::from_ranks(GridParams::new(n, d).unwrap(), ranks.iter().copied()).unwrap()
    }

    #[test]
    fn bipartite_examples() {
        let b = build_bipartite_b(&set(5, 1, &[2, 3]), &set(5, 1, &[0, 1])).unwrap();
        assert_eq!(b.sum_codes, vec![2, 3, 4]);
        assert_eq!(b.u_neighbors(0), &[0, 1]);
        assert_eq!(b.u_neighbors(1), &[1, 2]);
        let b = build_bipartite_b(&set(5, 1, &[2, 3]), &set(5, 1, &[])).unwrap();
        assert_eq!((b.edge_count(), b.w_count()), (0, 0));
        assert!(check_four_cycle_free(&b));
        assert!(build_bipartite_b(&set(5, 1, &[1, 3]), &set(5, 1, &[0, 1])).is_err());
        assert!(matches!(build_bipartite_b(&set(5, 1, &[4]), &set(5, 1, &[0, 1, 2])), Err(Error::NotSidon)));
    }

    #[test]
    fn degree_law() {
        let s = set(6, 2, &[0, 1, 8, 20]);
        let u = s.complement();
        let b = build_bipartite_b(&u, &s).unwrap();
        assert!((0..b.u_count()).all(|i| b.u_degree(i) == s.len()));
    }

    #[test]
    fn hand_built_four_cycle() {
        let b = BipartiteGraph::from_edges(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert!(!check_four_cycle_free(&b));
        let b = BipartiteGraph::from_edges(2, 3, &[(0, 0), (0, 1), (1, 1), (1, 2)]).unwrap();
        assert!(check_four_cycle_free(&b));
        assert!(check_four_cycle_free(&BipartiteGraph::from_edges(0, 0, &[]).unwrap()));
    }

    #[test]
    fn non_sidon_seed_creates_four_cycle() {
        let seed = set(10, 1, &[0, 1, 2]);
        let u = set(10, 1, &[5, 6]);
        assert!(!check_four_cycle_free(&bipartite_unchecked(&u, &seed)));
        assert!(check_four_cycle_free(&bipartite_unchecked(&u, &set(10, 1, &[0, 1, 3]))));
    }

    #[test]
    fn identity_examples() {
        assert_eq!(edge_count_identity(&set(5, 1, &[2, 3, 4]), &set(5, 1, &[0, 1])).unwrap(), (2, 2));
        assert_eq!(edge_count_identity(&set(5, 1, &[0, 1, 3, 4]), &set(5, 1, &[2])).unwrap(), (0, 0));
    }
}
