//! Sidon verification and the pairwise-sum multiset.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::grid::{GridParams, GridPoint, PointSet, SumPoint};

/// A witness `a + b = c + e` with `{a, b} ≠ {c, e}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub a: GridPoint,
    pub b: GridPoint,
    pub c: GridPoint,
    pub e: GridPoint,
    /// Ranks of `a, b, c, e`.
    pub ranks: [u64; 4],
}

impl Violation {
    /// True when the quadruple really is a sum collision of two distinct
    /// unordered pairs.
    pub fn is_valid(&self) -> bool {
        let [a, b, c, e] = self.ranks;
        let distinct = !((a == c && b == e) || (a == e && b == c));
        distinct && self.a.add(&self.b) == self.c.add(&self.e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SidonWitness {
    pub verdict: bool,
    pub violation: Option<Violation>,
}

impl SidonWitness {
    fn sidon() -> Self {
        SidonWitness { verdict: true, violation: None }
    }
}

/// Tracks which sum codes have been seen. Dense when the code space is small
/// relative to the number of pairs, hashed otherwise.
enum SumTracker {
    Dense(BitSet),
    Sparse(HashSet<u64>),
}

impl SumTracker {
    fn new(grid: &GridParams, points: usize) -> Self {
        let pairs = points * (points + 1) / 2;
        let space = grid.sum_size();
        if space <= (1 << 20) || space <= 64 * pairs as u64 {
            SumTracker::Dense(BitSet::new(space as usize))
        } else {
            SumTracker::Sparse(HashSet::with_capacity(pairs))
        }
    }

    /// Returns false if `code` was already present.
    #[inline]
    fn insert(&mut self, code: u64) -> bool {
        match self {
            SumTracker::Dense(bits) => {
                let i = code as usize;
                if bits.contains(i) {
                    false
                } else {
                    bits.insert(i);
                    true
                }
            }
            SumTracker::Sparse(set) => set.insert(code),
        }
    }
}

/// Decides whether `set` is a Sidon set in O(|S|²) time.
///
/// Pairs `(i, j)`, `i <= j`, are scanned in rank order. On failure the
/// violation is `(a, b, c, e)` where `(c, e)` is the first pair whose sum was
/// already produced and `(a, b)` is the earliest pair producing that sum.
pub fn is_sidon(set: &PointSet) -> SidonWitness {
    let grid = set.grid();
    let ranks = set.ranks();
    if ranks.len() < 2 {
        return SidonWitness::sidon();
    }
    let codes: Vec<u64> = ranks.iter().map(|&r| grid.embed(r)).collect();
    let mut seen = SumTracker::new(&grid, codes.len());
    let mut clash = None;
    'scan: for i in 0..codes.len() {
        for j in i..codes.len() {
            if !seen.insert(codes[i] + codes[j]) {
                clash = Some((i, j));
                break 'scan;
            }
        }
    }
    let Some((ci, cj)) = clash else {
        return SidonWitness::sidon();
    };
    let target = codes[ci] + codes[cj];
    let (ai, aj) = (0..codes.len())
        .flat_map(|i| (i..codes.len()).map(move |j| (i, j)))
        .find(|&(i, j)| codes[i] + codes[j] == target)
        .expect("colliding sum has an earlier pair");
    let pt = |i: usize| grid.unrank(ranks[i]).expect("rank in range");
    let violation =
        Violation { a: pt(ai), b: pt(aj), c: pt(ci), e: pt(cj), ranks: [ranks[ai], ranks[aj], ranks[ci], ranks[cj]] };
    debug_assert!(violation.is_valid());
    SidonWitness { verdict: false, violation: Some(violation) }
}

/// Multiset of all sums `a + b`, `a <= b` in rank order, keyed by sum code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumMultiset {
    grid: GridParams,
    counts: BTreeMap<u64, usize>,
}

impl SumMultiset {
    pub fn grid(&self) -> GridParams {
        self.grid
    }

    /// Multiplicities keyed by sum code (base `2n-1` rank).
    pub fn by_code(&self) -> &BTreeMap<u64, usize> {
        &self.counts
    }

    pub fn multiplicity(&self, w: &SumPoint) -> usize {
        self.grid.sum_rank(w).ok().and_then(|c| self.counts.get(&c).copied()).unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (SumPoint, usize)> + '_ {
        self.counts.iter().map(|(&code, &m)| (self.grid.sum_unrank(code).expect("valid sum code"), m))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sidon iff every multiplicity is one.
    pub fn all_distinct(&self) -> bool {
        self.counts.values().all(|&m| m == 1)
    }
}

pub fn sum_multiset(set: &PointSet) -> SumMultiset {
    let grid = set.grid();
    let codes: Vec<u64> = set.ranks().iter().map(|&r| grid.embed(r)).collect();
    let mut counts = BTreeMap::new();
    for i in 0..codes.len() {
        for j in i..codes.len() {
            *counts.entry(codes[i] + codes[j]).or_insert(0) += 1;
        }
    }
    SumMultiset { grid, counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn interval(n: u64, ranks: &[u64]) -> PointSet {
        PointSet::from_ranks(GridParams::interval(n).unwrap(), ranks.iter().copied()).unwrap()
    }

    /// Quadruple scan straight from the definition.
    fn sidon_by_quadruples(set: &PointSet) -> bool {
        let pts: Vec<GridPoint> = set.points().collect();
        let k = pts.len();
        for a in 0..k {
            for b in a..k {
                for c in 0..k {
                    for e in c..k {
                        if (a, b) != (c, e) && pts[a].add(&pts[b]) == pts[c].add(&pts[e]) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn trivial_sets_are_sidon() {
        let g = GridParams::new(5, 3).unwrap();
        assert!(is_sidon(&PointSet::empty(g)).verdict);
        assert!(is_sidon(&PointSet::from_ranks(g, [17]).unwrap()).verdict);
    }

    #[test]
    fn three_in_a_row() {
        let w = is_sidon(&interval(3, &[0, 1, 2]));
        assert!(!w.verdict);
        assert_eq!(w.violation.unwrap().ranks, [0, 2, 1, 1]);
    }

    #[test]
    fn unit_square() {
        let g = GridParams::new(2, 2).unwrap();
        let w = is_sidon(&PointSet::full(g));
        assert!(!w.verdict);
        let v = w.violation.unwrap();
        assert!(v.is_valid());
        let pair = |x: &GridPoint, y: &GridPoint| {
            let mut p = vec![x.coords().to_vec(), y.coords().to_vec()];
            p.sort();
            p
        };
        assert_eq!(pair(&v.a, &v.b), vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(pair(&v.c, &v.e), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn golomb_ruler_is_sidon() {
        assert!(is_sidon(&interval(7, &[0, 1, 4, 6])).verdict);
    }

    #[test]
    fn sum_multiset_examples() {
        let m = sum_multiset(&interval(3, &[0, 2]));
        assert_eq!(m.by_code().iter().map(|(&k, &v)| (k, v)).collect::<Vec<_>>(), vec![(0, 1), (2, 1), (4, 1)]);
        let m = sum_multiset(&interval(3, &[0, 1, 2]));
        assert_eq!(
            m.by_code().iter().map(|(&k, &v)| (k, v)).collect::<Vec<_>>(),
            vec![(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)]
        );
        assert!(!m.all_distinct());
        assert_eq!(m.multiplicity(&SumPoint::new(vec![2])), 2);
        assert!(sum_multiset(&interval(3, &[])).is_empty());
    }

    #[test]
    fn agrees_with_quadruple_scan_exhaustively() {
        for (n, d) in [(1, 1), (2, 1), (5, 1), (8, 1), (12, 1), (2, 2), (3, 2), (2, 3)] {
            let g = GridParams::new(n, d).unwrap();
            let size = g.size();
            for mask in 0u64..(1 << size) {
                let s = PointSet::from_ranks(g, (0..size).filter(|i| mask >> i & 1 == 1)).unwrap();
                let w = is_sidon(&s);
                assert_eq!(w.verdict, sidon_by_quadruples(&s), "{g} mask {mask:b}");
                assert_eq!(w.verdict, sum_multiset(&s).all_distinct());
                if let Some(v) = w.violation {
                    assert!(v.is_valid());
                }
            }
        }
    }

    fn arb_set() -> impl Strategy<Value = PointSet> {
        (2u64..9, 1u32..4).prop_flat_map(|(n, d)| {
            let g = GridParams::new(n, d).unwrap();
            proptest::collection::vec(0..g.size(), 0..12).prop_map(move |r| PointSet::from_ranks(g, r).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn agrees_with_quadruple_scan(s in arb_set()) {
            prop_assert_eq!(is_sidon(&s).verdict, sidon_by_quadruples(&s));
        }

        #[test]
        fn hereditary(s in arb_set(), drop in proptest::collection::vec(any::<bool>(), 12)) {
            if is_sidon(&s).verdict {
                let sub = PointSet::from_ranks(
                    s.grid(),
                    s.ranks().iter().zip(&drop).filter(|(_, &k)| k).map(|(&r, _)| r),
                ).unwrap();
                prop_assert!(is_sidon(&sub).verdict);
            }
        }

        #[test]
        fn translation_invariant(s in arb_set(), shift in proptest::collection::vec(-3i64..4, 3)) {
            let v = &shift[..s.grid().dim()];
            if let Some(t) = s.translate(v) {
                prop_assert_eq!(is_sidon(&s).verdict, is_sidon(&t).verdict);
            }
        }
    }
}
