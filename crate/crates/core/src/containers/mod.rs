//! Collision graphs of Sidon seeds, the sum/vertex bipartite graph, density
//! and container checks, and the closed-form counting bounds.
//!
//! For a Sidon set `S`, a set `T ⊇ S` is Sidon exactly when `T \ S` is
//! independent in the collision graph `G_S` and Sidon by itself, so counting
//! Sidon extensions reduces to counting independent sets.

pub mod bipartite;
pub mod bounds;
pub mod density;
pub mod graph;

pub use bipartite::{
    bipartite_unchecked, build_bipartite_b, check_four_cycle_free, edge_count_identity, BipartiteGraph,
};
pub use bounds::{
    bound_large, bound_small, bound_small_t_regime, c_omega, schedule, sparse_regime_base, BoundInputsLarge,
    BoundInputsSmall, BoundReport, DoublingSchedule,
};
pub use density::{
    binomial, min_edges_over_subsets, verify_container_lemma, verify_density_lemma, ContainerReport, ContainerStatus,
    DensityReport, LemmaStatus,
};
pub use graph::{build_collision_graph, count_independent_sets, CollisionGraph, Graph};
