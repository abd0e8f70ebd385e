//! Exact maximum Sidon subsets and exact counts of Sidon subsets.
//!
//! Both searches extend a Sidon set `S` by points in increasing rank order and
//! keep the set of still-admissible candidates as a bitset. Adding `x` to `S`
//! removes every `y` that would close a sum collision involving `x`:
//!
//! * `y = c + e - x` for `c, e ∈ S` (`x + y = c + e`),
//! * `y = x + c - b` for `b ≠ c ∈ S` (`x + c = y + b`),
//! * `y = 2x - b` for `b ∈ S` (`x + x = y + b`),
//! * `y = (x + c) / 2` for `c ∈ S` (`x + c = y + y`).
//!
//! Collisions not involving `x` were removed when the newest point in them
//! was added, so the candidate set stays exact.
//!
//! The maximum search is a Russian doll search: for `i` from the last point
//! down to the first it decides whether the suffix starting at `i` holds a
//! Sidon set one larger than the suffix starting at `i + 1`, using the
//! already solved suffixes as bounds.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::constructions::dense_sidon_in_grid;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::grid::{GridParams, PointSet};

/// Default node guard for exact counting.
pub const DEFAULT_COUNT_GUARD: u64 = 1_000_000_000;

/// Grids with at most this many points use a dense rank index.
const DENSE_INDEX_LIMIT: u64 = 1 << 24;

enum Index {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

/// A point set prepared for search: ranks, coordinates and a rank index.
pub(crate) struct Universe {
    grid: GridParams,
    ranks: Vec<u64>,
    coords: Vec<i64>,
    index: Index,
}

impl Universe {
    pub(crate) fn new(set: &PointSet) -> Self {
        let grid = set.grid();
        let ranks = set.ranks().to_vec();
        let coords = set.coord_table().into_iter().map(|c| c as i64).collect();
        let index = if grid.size() <= DENSE_INDEX_LIMIT {
            let mut dense = vec![u32::MAX; grid.size() as usize];
            for (i, &r) in ranks.iter().enumerate() {
                dense[r as usize] = i as u32;
            }
            Index::Dense(dense)
        } else {
            Index::Sparse(ranks.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect())
        };
        Universe { grid, ranks, coords, index }
    }

    pub(crate) fn len(&self) -> usize {
        self.ranks.len()
    }

    #[inline]
    fn lookup(&self, rank: u64) -> Option<usize> {
        match &self.index {
            Index::Dense(v) => v.get(rank as usize).filter(|&&i| i != u32::MAX).map(|&i| i as usize),
            Index::Sparse(m) => m.get(&rank).map(|&i| i as usize),
        }
    }

    #[inline]
    fn point(&self, i: usize) -> &[i64] {
        let d = self.grid.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    /// Index of the point `u + v - w` if it lies in the universe.
    #[inline]
    fn combine(&self, u: usize, v: usize, w: usize) -> Option<usize> {
        let n = self.grid.n() as i64;
        let (pu, pv, pw) = (self.point(u), self.point(v), self.point(w));
        for k in 0..pu.len() {
            let c = pu[k] + pv[k] - pw[k];
            if c < 0 || c >= n {
                return None;
            }
        }
        self.lookup(self.ranks[u].wrapping_add(self.ranks[v]).wrapping_sub(self.ranks[w]))
    }

    /// Index of the midpoint of `u` and `v` if it is a lattice point of the
    /// universe.
    #[inline]
    fn midpoint(&self, u: usize, v: usize) -> Option<usize> {
        let (pu, pv) = (self.point(u), self.point(v));
        if pu.iter().zip(pv).any(|(a, b)| (a + b) % 2 != 0) {
            return None;
        }
        self.lookup((self.ranks[u] + self.ranks[v]) / 2)
    }

    /// Removes from `cand` every point that cannot join `set ∪ {x}`, assuming
    /// `cand` was exact for `set` and `x ∈ cand`.
    fn forbid(&self, set: &[usize], x: usize, cand: &mut BitSet) {
        cand.remove(x);
        for (i, &c) in set.iter().enumerate() {
            for &e in &set[i..] {
                if let Some(y) = self.combine(c, e, x) {
                    cand.remove(y);
                }
            }
            for &b in set {
                if b != c {
                    if let Some(y) = self.combine(x, c, b) {
                        cand.remove(y);
                    }
                }
            }
            if let Some(y) = self.combine(x, x, c) {
                cand.remove(y);
            }
            if let Some(y) = self.midpoint(x, c) {
                cand.remove(y);
            }
        }
    }

    fn to_set(&self, idx: &[usize]) -> PointSet {
        let mut ranks: Vec<u64> = idx.iter().map(|&i| self.ranks[i]).collect();
        ranks.sort_unstable();
        PointSet::from_sorted_unchecked(self.grid, ranks)
    }
}

/// Outcome of a maximum search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxSidonResult {
    pub size: usize,
    pub witness: PointSet,
    pub nodes_explored: u64,
    /// True when the search proved that no larger Sidon subset exists.
    pub optimal: bool,
}

struct MaxSearch<'a> {
    u: &'a Universe,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    /// `best[i]`: maximum Sidon subset size among points `i..`.
    best: Vec<usize>,
    set: Vec<usize>,
    witness: Vec<usize>,
    pool: Vec<BitSet>,
}

impl MaxSearch<'_> {
    fn run(&mut self) {
        let k = self.u.len();
        for i in (0..k).rev() {
            let target = self.best[i + 1] + 1;
            self.set.clear();
            self.set.push(i);
            let cand = BitSet::with_range(k, i + 1..k);
            let found = self.extend(&cand, target);
            if self.exhausted {
                return;
            }
            self.best[i] = if found { target } else { self.best[i + 1] };
        }
    }

    fn extend(&mut self, cand: &BitSet, target: usize) -> bool {
        self.nodes += 1;
        if self.budget > 0 && self.nodes > self.budget {
            self.exhausted = true;
            return false;
        }
        let depth = self.set.len();
        if depth == target {
            self.witness = self.set.clone();
            return true;
        }
        if depth + cand.count() < target {
            return false;
        }
        if self.pool.len() <= depth {
            self.pool.resize_with(depth + 1, || BitSet::new(cand.capacity()));
        }
        let mut next = cand.next_from(0);
        while let Some(c) = next {
            if depth + self.best[c] < target {
                break;
            }
            let mut child = std::mem::take(&mut self.pool[depth]);
            child.copy_from(cand);
            child.clear_through(c);
            self.u.forbid(&self.set, c, &mut child);
            self.set.push(c);
            let found = self.extend(&child, target);
            self.set.pop();
            self.pool[depth] = child;
            if found {
                return true;
            }
            if self.exhausted {
                return false;
            }
            next = cand.next_from(c + 1);
        }
        false
    }
}

/// Greedy Sidon subset: scan in rank order and keep every admissible point.
fn greedy(u: &Universe) -> Vec<usize> {
    let mut cand = BitSet::full(u.len());
    let mut set = Vec::new();
    while let Some(x) = cand.next_from(set.last().map_or(0, |&l| l + 1)) {
        u.forbid(&set, x, &mut cand);
        set.push(x);
    }
    set
}

fn max_search(u: &Universe, budget: u64, incumbent: Option<&PointSet>) -> MaxSidonResult {
    let k = u.len();
    let mut search = MaxSearch {
        u,
        budget,
        nodes: 0,
        exhausted: false,
        best: vec![0; k + 1],
        set: Vec::new(),
        witness: Vec::new(),
        pool: Vec::new(),
    };
    search.run();
    let found = u.to_set(&search.witness);
    if !search.exhausted {
        return MaxSidonResult { size: found.len(), witness: found, nodes_explored: search.nodes, optimal: true };
    }
    let seed = match incumbent {
        Some(s) => s.clone(),
        None => u.to_set(&greedy(u)),
    };
    let witness = if seed.len() > found.len() { seed } else { found };
    MaxSidonResult { size: witness.len(), witness, nodes_explored: search.nodes, optimal: false }
}

/// `F([n]^d)` by exhaustive search; `budget` caps the number of search nodes
/// (`0` = unlimited). When the budget runs out the better of the partial
/// search and the explicit construction is returned with `optimal = false`.
pub fn max_sidon_exact(grid: &GridParams, budget: u64) -> MaxSidonResult {
    let full = PointSet::full(*grid);
    let u = Universe::new(&full);
    max_search(&u, budget, Some(&dense_sidon_in_grid(grid)))
}

/// Largest Sidon subset of `r`. The fallback on budget exhaustion is a greedy
/// pass in rank order.
pub fn max_sidon_subset(r: &PointSet, budget: u64) -> MaxSidonResult {
    max_search(&Universe::new(r), budget, None)
}

/// As [`max_sidon_subset`] with a caller-supplied fallback, which must be a
/// Sidon subset of `r`.
pub fn max_sidon_subset_with(r: &PointSet, budget: u64, incumbent: &PointSet) -> MaxSidonResult {
    debug_assert!(incumbent.is_subset_of(r));
    max_search(&Universe::new(r), budget, Some(incumbent))
}

/// Greedy Sidon subset of `r`, scanning in rank order.
pub fn greedy_sidon_subset(r: &PointSet) -> PointSet {
    let u = Universe::new(r);
    u.to_set(&greedy(&u))
}

/// Greedy Sidon subset of `r`, visiting its points in `order` (indices into
/// `r.ranks()`; repeats and out-of-range indices are skipped).
pub fn greedy_sidon_in_order(r: &PointSet, order: &[usize]) -> PointSet {
    let u = Universe::new(r);
    let mut cand = BitSet::full(u.len());
    let mut set = Vec::new();
    for &x in order {
        if x < u.len() && cand.contains(x) {
            u.forbid(&set, x, &mut cand);
            set.push(x);
        }
    }
    u.to_set(&set)
}

/// `counts[t]` = number of Sidon subsets of size `t`, empty set included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountProfile {
    pub grid: GridParams,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl CountProfile {
    /// Largest size with a nonzero count.
    pub fn max_size(&self) -> usize {
        self.counts.len() - 1
    }

    /// `t,count` lines without header.
    pub fn to_csv(&self) -> String {
        self.counts.iter().enumerate().map(|(t, c)| format!("{t},{c}")).collect::<Vec<_>>().join("\n")
    }
}

#[derive(Clone, Debug)]
pub struct CountOptions {
    /// Maximum number of search nodes (one node per Sidon set).
    pub guard: u64,
    pub executor: Executor,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { guard: DEFAULT_COUNT_GUARD, executor: Executor::sequential() }
    }
}

struct Counter<'a> {
    u: &'a Universe,
    cap: u64,
    nodes: u64,
    counts: Vec<u64>,
    /// Only sets of this size are counted and nothing larger is explored.
    exact_size: Option<usize>,
    set: Vec<usize>,
    pool: Vec<BitSet>,
}

impl Counter<'_> {
    fn new(u: &Universe, cap: u64, exact_size: Option<usize>) -> Counter<'_> {
        Counter { u, cap, nodes: 0, counts: Vec::new(), exact_size, set: Vec::new(), pool: Vec::new() }
    }

    /// Returns false once the node cap is exceeded.
    fn visit(&mut self, cand: &BitSet) -> bool {
        self.nodes += 1;
        if self.cap > 0 && self.nodes > self.cap {
            return false;
        }
        let depth = self.set.len();
        if let Some(t) = self.exact_size {
            if depth == t {
                self.counts[0] += 1;
                return true;
            }
            if depth + cand.count() < t {
                return true;
            }
        } else {
            if self.counts.len() <= depth {
                self.counts.resize(depth + 1, 0);
            }
            self.counts[depth] += 1;
        }
        if self.pool.len() <= depth {
            self.pool.resize_with(depth + 1, || BitSet::new(cand.capacity()));
        }
        let mut next = cand.next_from(0);
        while let Some(c) = next {
            let mut child = std::mem::take(&mut self.pool[depth]);
            child.copy_from(cand);
            child.clear_through(c);
            self.u.forbid(&self.set, c, &mut child);
            self.set.push(c);
            let ok = self.visit(&child);
            self.set.pop();
            self.pool[depth] = child;
            if !ok {
                return false;
            }
            next = cand.next_from(c + 1);
        }
        true
    }

    /// Counts every Sidon set whose smallest point is `first`.
    fn branch(&mut self, first: usize) -> bool {
        let k = self.u.len();
        self.set.clear();
        self.set.push(first);
        let cand = BitSet::with_range(k, first + 1..k);
        self.visit(&cand)
    }
}

/// Knuth's random-path estimate of the number of Sidon subsets, averaged
/// over `probes` paths.
pub fn estimate_sidon_count(grid: &GridParams, probes: u32, seed: u64) -> f64 {
    let u = Universe::new(&PointSet::full(*grid));
    knuth_estimate(&u, probes, seed)
}

fn knuth_estimate(u: &Universe, probes: u32, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut cand = BitSet::new(u.len());
    for _ in 0..probes {
        cand.insert_range(0..u.len());
        let mut set = Vec::new();
        let (mut weight, mut est) = (1.0f64, 1.0f64);
        loop {
            let choices: Vec<usize> = cand.iter().collect();
            if choices.is_empty() {
                break;
            }
            weight *= choices.len() as f64;
            est += weight;
            let x = choices[rng.random_range(0..choices.len())];
            cand.clear_through(x);
            u.forbid(&set, x, &mut cand);
            set.push(x);
        }
        sum += est;
    }
    sum / probes.max(1) as f64
}

/// Screens out grids whose estimated search tree dwarfs the guard.
fn screen(u: &Universe, grid: &GridParams, guard: u64) -> Result<()> {
    const SCREEN_FACTOR: f64 = 1000.0;
    if guard == 0 {
        return Ok(());
    }
    let est = knuth_estimate(u, 256, 0x5eed);
    if est > SCREEN_FACTOR * guard as f64 {
        return Err(too_large(grid, guard, Some(est)));
    }
    Ok(())
}

fn too_large(grid: &GridParams, guard: u64, est: Option<f64>) -> Error {
    let est = est.map(|e| format!(" (estimated {e:.3e} nodes)")).unwrap_or_default();
    Error::TooLarge(format!("too large for exact count: {grid} exceeds the guard of {guard} search nodes{est}"))
}

/// Exact `Z_{n,d}(t)` for every `t`, with the default guard.
pub fn count_profile(grid: &GridParams) -> Result<CountProfile> {
    count_profile_with(grid, &CountOptions::default())
}

/// Exact counts; top-level branches (smallest point) run on the executor.
/// Fails with [`Error::TooLarge`] exactly when the search needs more than
/// `guard` nodes (`0` = unlimited), independent of the thread count.
pub fn count_profile_with(grid: &GridParams, opts: &CountOptions) -> Result<CountProfile> {
    let u = Universe::new(&PointSet::full(*grid));
    screen(&u, grid, opts.guard)?;
    let cap = opts.guard.saturating_sub(1);
    let branches = opts.executor.map((0..u.len()).collect(), |first| {
        let mut c = Counter::new(&u, cap, None);
        let ok = c.branch(first);
        (ok, c.nodes, c.counts)
    });
    let mut counts = vec![1u64];
    let mut nodes = 1u64;
    for (ok, n, branch) in branches {
        if !ok {
            return Err(too_large(grid, opts.guard, None));
        }
        nodes += n;
        if counts.len() < branch.len() {
            counts.resize(branch.len(), 0);
        }
        for (t, c) in branch.into_iter().enumerate() {
            counts[t] += c;
        }
    }
    if opts.guard > 0 && nodes > opts.guard {
        return Err(too_large(grid, opts.guard, None));
    }
    let total = counts.iter().sum();
    Ok(CountProfile { grid: *grid, counts, total })
}

/// Exact `Z_{n,d}(t)`, abandoning branches that cannot reach size `t`.
/// `budget` caps search nodes (`0` = unlimited).
pub fn count_of_size(grid: &GridParams, t: usize, budget: u64) -> Result<u64> {
    if t == 0 {
        return Ok(1);
    }
    let u = Universe::new(&PointSet::full(*grid));
    let mut c = Counter::new(&u, budget, Some(t));
    c.counts = vec![0];
    for first in 0..u.len() {
        if !c.branch(first) {
            return Err(too_large(grid, budget, None));
        }
    }
    Ok(c.counts[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sidon::is_sidon;
    use proptest::prelude::*;

    /// Sidon subsets of a small point set, by filtering all subsets.
    fn brute_force_sizes(r: &PointSet) -> Vec<u64> {
        let k = r.len();
        let mut counts = vec![0u64; k + 1];
        for mask in 0u64..(1 << k) {
            let s =
                PointSet::from_ranks(r.grid(), (0..k).filter(|i| mask >> i & 1 == 1).map(|i| r.ranks()[i])).unwrap();
            if is_sidon(&s).verdict {
                counts[s.len()] += 1;
            }
        }
        while counts.last() == Some(&0) {
            counts.pop();
        }
        counts
    }

    fn grid(n: u64, d: u32) -> GridParams {
        GridParams::new(n, d).unwrap()
    }

    #[test]
    fn max_examples() {
        let r = max_sidon_exact(&grid(3, 1), 0);
        assert_eq!((r.size, r.optimal), (2, true));
        let r = max_sidon_exact(&grid(7, 1), 0);
        assert_eq!(r.size, 4);
        assert!(is_sidon(&r.witness).verdict);
        assert_eq!(max_sidon_exact(&grid(2, 2), 0).size, 3);
        for d in 1..5 {
            assert_eq!(max_sidon_exact(&grid(1, d), 0).size, 1);
        }
    }

    #[test]
    fn subset_examples() {
        let g = grid(4, 1);
        assert_eq!(max_sidon_subset(&PointSet::empty(g), 0).size, 0);
        let r = max_sidon_subset(&PointSet::full(g), 0);
        assert_eq!(r.size, 3);
        assert!([vec![0, 1, 3], vec![0, 2, 3]].contains(&r.witness.ranks().to_vec()));
        let s = PointSet::from_ranks(grid(20, 1), [0, 1, 4, 9, 15]).unwrap();
        assert!(is_sidon(&s).verdict);
        assert_eq!(max_sidon_subset(&s, 0).witness, s);
    }

    #[test]
    fn interval_maxima() {
        let expected = [1, 2, 2, 3, 3, 3, 4, 4, 4, 4, 4, 5];
        for (i, &f) in expected.iter().enumerate() {
            let r = max_sidon_exact(&grid(i as u64 + 1, 1), 0);
            assert_eq!((r.size, r.optimal), (f, true), "n={}", i + 1);
            assert!(is_sidon(&r.witness).verdict);
        }
        // Optimal Golomb rulers with 6, 7 and 8 marks have lengths 17, 25, 34.
        for (n, f) in [(17, 5), (18, 6), (25, 6), (26, 7), (34, 7), (35, 8)] {
            assert_eq!(max_sidon_exact(&grid(n, 1), 0).size, f, "n={n}");
        }
    }

    #[test]
    fn budget_exhaustion_returns_construction() {
        let g = grid(40, 1);
        let r = max_sidon_exact(&g, 50);
        assert!(!r.optimal);
        assert_eq!(r.nodes_explored, 51);
        assert!(r.size >= dense_sidon_in_grid(&g).len());
        assert!(is_sidon(&r.witness).verdict);
        let r = max_sidon_subset(&PointSet::full(g), 50);
        assert!(!r.optimal && is_sidon(&r.witness).verdict && r.size >= 1);
    }

    #[test]
    fn count_examples() {
        let p = count_profile(&grid(3, 1)).unwrap();
        assert_eq!((p.counts.clone(), p.total), (vec![1, 3, 3], 7));
        assert_eq!(p.to_csv(), "0,1\n1,3\n2,3");
        let p = count_profile(&grid(2, 2)).unwrap();
        assert_eq!((p.counts, p.total), (vec![1, 4, 6, 4], 15));
        let p = count_profile(&grid(1, 1)).unwrap();
        assert_eq!((p.counts, p.total), (vec![1, 1], 2));
        assert_eq!(count_of_size(&grid(3, 1), 2, 0).unwrap(), 3);
        assert_eq!(count_of_size(&grid(3, 1), 0, 0).unwrap(), 1);
        assert_eq!(count_of_size(&grid(3, 1), 3, 0).unwrap(), 0);
    }

    #[test]
    fn interval_totals() {
        // Independent subset-filter counts for n = 7, 8, 16, 20.
        for (n, total) in [(7, 57), (8, 91), (16, 1919), (20, 6845)] {
            assert_eq!(count_profile(&grid(n, 1)).unwrap().total, total, "n={n}");
        }
        assert_eq!(count_profile(&grid(7, 1)).unwrap().counts, vec![1, 7, 21, 26, 2]);
    }

    #[test]
    fn counts_match_subset_filter() {
        for (n, d) in [(1, 1), (2, 1), (5, 1), (9, 1), (12, 1), (2, 2), (3, 2), (2, 3), (4, 2)] {
            let g = grid(n, d);
            let p = count_profile(&g).unwrap();
            assert_eq!(p.counts, brute_force_sizes(&PointSet::full(g)), "{g}");
            for t in 0..p.counts.len() + 1 {
                assert_eq!(count_of_size(&g, t, 0).unwrap(), p.counts.get(t).copied().unwrap_or(0));
            }
        }
    }

    #[test]
    fn guard_is_exact_and_thread_independent() {
        let g = grid(12, 1);
        let total = count_profile(&g).unwrap().total;
        for threads in [1, 3] {
            let executor = Executor::with_threads(threads).unwrap();
            let ok = CountOptions { guard: total, executor: executor.clone() };
            assert_eq!(count_profile_with(&g, &ok).unwrap().total, total);
            let tight = CountOptions { guard: total - 1, executor };
            let err = count_profile_with(&g, &tight).unwrap_err();
            assert!(err.to_string().contains("too large for exact count"), "{err}");
        }
        assert!(matches!(
            count_profile_with(&grid(60, 2), &CountOptions { guard: 1000, ..Default::default() }),
            Err(Error::TooLarge(_))
        ));
        assert!(count_of_size(&g, 3, 10).is_err());
    }

    #[test]
    fn knuth_estimate_is_unbiased_on_small_grid() {
        let g = grid(10, 1);
        let exact = count_profile(&g).unwrap().total as f64;
        let est = estimate_sidon_count(&g, 20_000, 7);
        assert!((est / exact - 1.0).abs() < 0.1, "est {est} exact {exact}");
    }

    #[test]
    fn count_bounds_and_maximum_agree() {
        for (n, d) in [(6, 1), (11, 1), (2, 2), (3, 2), (2, 3)] {
            let g = grid(n, d);
            let p = count_profile(&g).unwrap();
            let f = max_sidon_exact(&g, 0).size;
            assert_eq!(p.max_size(), f);
            assert!(p.total >= 1 << f);
        }
    }

    fn arb_subset() -> impl Strategy<Value = PointSet> {
        (2u64..7, 1u32..4).prop_flat_map(|(n, d)| {
            let g = GridParams::new(n, d).unwrap();
            proptest::collection::vec(0..g.size(), 0..14).prop_map(move |r| PointSet::from_ranks(g, r).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn subset_maximum_matches_filter(r in arb_subset()) {
            let res = max_sidon_subset(&r, 0);
            prop_assert!(res.optimal);
            prop_assert_eq!(res.size, brute_force_sizes(&r).len() - 1);
            prop_assert!(is_sidon(&res.witness).verdict && res.witness.is_subset_of(&r));
        }

        #[test]
        fn greedy_is_sidon(r in arb_subset()) {
            let s = greedy_sidon_subset(&r);
            prop_assert!(is_sidon(&s).verdict && s.is_subset_of(&r));
        }

        #[test]
        fn ordered_greedy_is_maximal(r in arb_subset(), key in any::<u64>()) {
            let identity: Vec<usize> = (0..r.len()).collect();
            prop_assert_eq!(greedy_sidon_in_order(&r, &identity), greedy_sidon_subset(&r));
            let mut order = identity;
            order.sort_by_key(|&i| (i as u64).wrapping_mul(key | 1).rotate_left(17));
            let s = greedy_sidon_in_order(&r, &order);
            prop_assert!(is_sidon(&s).verdict && s.is_subset_of(&r));
            for &x in r.ranks() {
                if !s.contains(x) {
                    let mut bigger = s.ranks().to_vec();
                    bigger.push(x);
                    prop_assert!(!is_sidon(&PointSet::from_ranks(r.grid(), bigger).unwrap()).verdict);
                }
            }
        }
    }
}
