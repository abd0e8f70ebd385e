//! Edge-density verification for collision graphs and the container
//! inequality for independent sets.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::grid::PointSet;

use super::graph::{build_collision_graph, count_independent_sets, Graph, INDEPENDENT_SET_GUARD};

/// Vertex sets are enumerated exhaustively up to this many vertices.
pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 20;

/// Default number of sampled vertex sets when enumeration is infeasible.
pub const DEFAULT_DENSITY_SAMPLES: u64 = 10_000;

/// Largest number of `R`-subsets enumerated when checking a density hypothesis.
pub const HYPOTHESIS_SUBSET_GUARD: u128 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaStatus {
    Pass,
    Fail,
    /// No vertex set is large enough for the inequality to apply.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub s: usize,
    pub vertices: usize,
    /// Smallest qualifying `|U|`, i.e. `⌈2^{d+1} n^d / s⌉`.
    pub threshold: u64,
    pub beta: f64,
    pub status: LemmaStatus,
    pub exhaustive: bool,
    pub checked: u64,
    pub failures: u64,
    /// Smallest `e(U) / (β·C(|U|, 2))` seen.
    pub worst_ratio: Option<f64>,
    /// Ranks of a vertex set attaining `worst_ratio`.
    pub worst_set: Option<Vec<u64>>,
}

/// Compares `e(U)` with `s²/(2^{d+1} n^d)·C(|U|, 2)` exactly.
struct DensityTest {
    s2: u128,
    denom: u128,
    beta: f64,
}

impl DensityTest {
    fn holds(&self, edges: u64, size: u64) -> bool {
        edges as u128 * self.denom >= self.s2 * pairs(size)
    }

    fn ratio(&self, edges: u64, size: u64) -> f64 {
        edges as f64 / (self.beta * pairs(size) as f64)
    }
}

fn pairs(k: u64) -> u128 {
    k as u128 * k.saturating_sub(1) as u128 / 2
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failures: u64,
    worst: Option<(f64, Vec<usize>)>,
}

impl Tally {
    fn record(&mut self, test: &DensityTest, edges: u64, u: impl FnOnce() -> Vec<usize>, size: u64) {
        self.checked += 1;
        if !test.holds(edges, size) {
            self.failures += 1;
        }
        let ratio = test.ratio(edges, size);
        if self.worst.as_ref().is_none_or(|(w, _)| ratio < *w) {
            self.worst = Some((ratio, u()));
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures += other.failures;
        if let Some((r, u)) = other.worst {
            if self.worst.as_ref().is_none_or(|(w, _)| r < *w) {
                self.worst = Some((r, u));
            }
        }
    }
}

/// Checks `e(U) ≥ β·C(|U|, 2)` with `β = s²/(2^{d+1} n^d)` for vertex sets
/// `U` of `G_S` with `|U| ≥ 2^{d+1} n^d / s`: every such `U` when the graph
/// has at most [`EXHAUSTIVE_VERTEX_LIMIT`] vertices, otherwise `samples`
/// random ones (size uniform over the qualifying range, then a uniform
/// subset of that size).
pub fn verify_density_lemma(
    seed: &PointSet,
    samples: u64,
    rng_seed: u64,
    executor: &Executor,
) -> Result<DensityReport> {
    let cg = build_collision_graph(seed)?;
    let grid = seed.grid();
    let s = seed.len();
    let graph = &cg.graph;
    let n_vertices = graph.vertex_count();
    let scale = (1u128 << (grid.d() + 1)) * grid.size() as u128;
    let test = DensityTest { s2: (s * s) as u128, denom: scale, beta: (s * s) as f64 / scale as f64 };
    let threshold = if s == 0 { u64::MAX } else { scale.div_ceil(s as u128).min(u64::MAX as u128) as u64 };
    let mut report = DensityReport {
        s,
        vertices: n_vertices,
        threshold,
        beta: test.beta,
        status: LemmaStatus::Vacuous,
        exhaustive: n_vertices <= EXHAUSTIVE_VERTEX_LIMIT,
        checked: 0,
        failures: 0,
        worst_ratio: None,
        worst_set: None,
    };
    if threshold > n_vertices as u64 {
        return Ok(report);
    }
    let tally = if report.exhaustive {
        exhaustive_density(graph, &test, threshold)
    } else {
        sampled_density(graph, &test, threshold, samples, rng_seed, executor)
    };
    report.checked = tally.checked;
    report.failures = tally.failures;
    report.status = if tally.failures == 0 { LemmaStatus::Pass } else { LemmaStatus::Fail };
    if let Some((ratio, u)) = tally.worst {
        report.worst_ratio = Some(ratio);
        report.worst_set = Some(u.iter().map(|&v| graph.label(v)).collect());
    }
    Ok(report)
}

fn exhaustive_density(graph: &Graph, test: &DensityTest, threshold: u64) -> Tally {
    let n = graph.vertex_count();
    let masks = graph.masks();
    let mut tally = Tally::default();
    for u in 0u64..1 << n {
        let size = u.count_ones() as u64;
        if size < threshold {
            continue;
        }
        let twice: u32 = (0..n).filter(|&v| u >> v & 1 == 1).map(|v| (masks[v] & u).count_ones()).sum();
        let members = || (0..n).filter(|&v| u >> v & 1 == 1).collect();
        tally.record(test, twice as u64 / 2, members, size);
    }
    tally
}

fn sampled_density(
    graph: &Graph,
    test: &DensityTest,
    threshold: u64,
    samples: u64,
    rng_seed: u64,
    executor: &Executor,
) -> Tally {
    const CHUNK: u64 = 256;
    let n = graph.vertex_count();
    let chunks: Vec<u64> = (0..samples.div_ceil(CHUNK)).collect();
    let tallies = executor.map(chunks, |c| {
        let mut tally = Tally::default();
        for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(i);
            let size = rng.random_range(threshold as usize..=n);
            let mut u = sample(&mut rng, n, size).into_vec();
            u.sort_unstable();
            let edges = graph.induced_edge_count(&u);
            tally.record(test, edges, || u.clone(), size as u64);
        }
        tally
    });
    let mut total = Tally::default();
    for t in tallies {
        total.merge(t);
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum ContainerStatus {
    Holds,
    Violated,
    /// The density or size hypothesis failed; nothing is asserted.
    HypothesisNotMet(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainerReport {
    pub status: ContainerStatus,
    /// Independent sets of size `q + r`.
    pub independent_sets: Option<u128>,
    /// `C(N, q)·C(R, r)`.
    pub bound: Option<u128>,
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// Minimum of `e(W)` over all `r`-subsets `W`, or `None` when there are more
/// than [`HYPOTHESIS_SUBSET_GUARD`] of them.
pub fn min_edges_over_subsets(g: &Graph, r: usize) -> Option<u64> {
    let n = g.vertex_count();
    if r > n || n > 64 || binomial(n as u64, r as u64)? > HYPOTHESIS_SUBSET_GUARD {
        return None;
    }
    let masks = g.masks();
    let edges_in = |w: u64| -> u64 {
        let twice: u32 = (0..n).filter(|&v| w >> v & 1 == 1).map(|v| (masks[v] & w).count_ones()).sum();
        twice as u64 / 2
    };
    if r == 0 {
        return Some(0);
    }
    let limit = if n == 64 { u64::MAX } else { 1u64 << n };
    let mut w: u64 = (1u64 << r) - 1;
    let mut best = u64::MAX;
    // Gosper's hack walks the r-subsets in increasing order.
    while w < limit {
        best = best.min(edges_in(w));
        let c = w & w.wrapping_neg();
        let rr = w + c;
        if rr == 0 {
            break;
        }
        w = (((rr ^ w) >> 2) / c) | rr;
    }
    Some(best)
}

/// Checks the container inequality `#{independent sets of size q + r} ≤
/// C(N, q)·C(R, r)` after verifying its hypotheses: `e(U) ≥ β·C(|U|, 2)` for
/// every `|U| ≥ R` and `q ≥ β^{-1} ln(N / R)`.
///
/// Density is checked on sets of size exactly `R`: the density of a larger
/// set is the average density of its `R`-subsets.
pub fn verify_container_lemma(g: &Graph, r_threshold: u64, beta: f64, q: u64, r: u64) -> Result<ContainerReport> {
    let n = g.vertex_count();
    if n > INDEPENDENT_SET_GUARD {
        return Err(Error::TooLarge(format!(
            "container check too large: need at most {INDEPENDENT_SET_GUARD} vertices, got {n}"
        )));
    }
    let not_met = |why: String| {
        Ok(ContainerReport { status: ContainerStatus::HypothesisNotMet(why), independent_sets: None, bound: None })
    };
    if r_threshold == 0 || !(beta > 0.0 && beta <= 1.0) || q == 0 {
        return not_met(format!("need R >= 1, 0 < beta <= 1, q >= 1; got R={r_threshold}, beta={beta}, q={q}"));
    }
    if r_threshold <= n as u64 {
        let Some(min_edges) = min_edges_over_subsets(g, r_threshold as usize) else {
            return not_met(format!("too many {r_threshold}-subsets to verify density"));
        };
        let needed = beta * pairs(r_threshold) as f64;
        if (min_edges as f64) < needed * (1.0 - 1e-12) {
            return not_met(format!("a set of size {r_threshold} spans {min_edges} edges, below {needed:.4}"));
        }
    }
    let q_min = (n as f64 / r_threshold as f64).ln() / beta;
    if (q as f64) < q_min {
        return not_met(format!("q={q} is below beta^-1 ln(N/R) = {q_min:.4}"));
    }
    let count = count_independent_sets(g, (q + r) as usize)?;
    let bound = binomial(n as u64, q).and_then(|a| a.checked_mul(binomial(r_threshold, r)?));
    let status = match bound {
        Some(b) if count > b => ContainerStatus::Violated,
        _ => ContainerStatus::Holds,
    };
    Ok(ContainerReport { status, independent_sets: Some(count), bound })
}
