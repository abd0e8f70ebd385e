//! The grid `[n]^d = {0, …, n-1}^d`, its points, and rank-sorted point sets.
//!
//! A point `(a_0, …, a_{d-1})` is identified with its rank `Σ a_i·n^i`.
//! Sums of two points have coordinates in `[0, 2n-2]` and are ranked in base
//! `2n-1`, which makes the sum encoding collision free.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side length `n` and dimension `d` of the ambient grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct GridParams {
    n: u64,
    d: u32,
    size: u64,
    sum_size: u64,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    n: u64,
    d: u32,
}

impl TryFrom<RawGrid> for GridParams {
    type Error = Error;
    fn try_from(raw: RawGrid) -> Result<Self> {
        GridParams::new(raw.n, raw.d)
    }
}

impl From<GridParams> for RawGrid {
    fn from(g: GridParams) -> Self {
        RawGrid { n: g.n, d: g.d }
    }
}

impl GridParams {
    /// Rejects `n = 0`, `d = 0`, and grids whose point count `n^d` or sum
    /// space `(2n-1)^d` does not fit in a `u64`.
    pub fn new(n: u64, d: u32) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidGrid(format!("need n >= 1 and d >= 1, got n={n}, d={d}")));
        }
        let size = n.checked_pow(d).ok_or_else(|| Error::InvalidGrid(format!("n^d overflows u64 for n={n}, d={d}")))?;
        let sum_size = (2 * n - 1)
            .checked_pow(d)
            .ok_or_else(|| Error::InvalidGrid(format!("(2n-1)^d overflows u64 for n={n}, d={d}")))?;
        Ok(GridParams { n, d, size, sum_size })
    }

    /// The one-dimensional interval `[0, m)`.
    pub fn interval(m: u64) -> Result<Self> {
        GridParams::new(m, 1)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.d as usize
    }

    /// Number of grid points, `n^d`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Radix of the sum encoding, `2n - 1`.
    pub fn sum_base(&self) -> u64 {
        2 * self.n - 1
    }

    /// Number of distinct sum codes, `(2n-1)^d`.
    pub fn sum_size(&self) -> u64 {
        self.sum_size
    }

    pub fn rank(&self, p: &GridPoint) -> Result<u64> {
        self.check_point(p)?;
        Ok(p.coords.iter().rev().fold(0, |acc, &c| acc * self.n + c))
    }

    pub fn unrank(&self, rank: u64) -> Result<GridPoint> {
        if rank >= self.size {
            return Err(Error::RankOutOfRange { value: rank, size: self.size });
        }
        let mut coords = vec![0; self.dim()];
        self.write_coords(rank, &mut coords);
        Ok(GridPoint { coords })
    }

    /// Writes the coordinates of `rank` into `out` without validation.
    #[inline]
    pub fn write_coords(&self, mut rank: u64, out: &mut [u64]) {
        for c in out.iter_mut() {
            *c = rank % self.n;
            rank /= self.n;
        }
    }

    /// Rank of a point in the sum encoding: `Σ a_i·(2n-1)^i`. Because the map
    /// is linear and no coordinate sum reaches `2n-1`, `embed(a) + embed(b)`
    /// is exactly the sum code of `a + b`.
    pub fn embed(&self, rank: u64) -> u64 {
        if self.d == 1 {
            return rank;
        }
        let base = self.sum_base();
        let mut r = rank;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.d {
            out += (r % self.n) * scale;
            r /= self.n;
            scale = scale.wrapping_mul(base);
        }
        out
    }

    pub fn sum_rank(&self, w: &SumPoint) -> Result<u64> {
        if w.coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: w.coords.len() });
        }
        let base = self.sum_base();
        for (index, &c) in w.coords.iter().enumerate() {
            if c >= base {
                return Err(Error::CoordinateOutOfRange { index, value: c as i64, n: base });
            }
        }
        Ok(w.coords.iter().rev().fold(0, |acc, &c| acc * base + c))
    }

    pub fn sum_unrank(&self, mut code: u64) -> Result<SumPoint> {
        if code >= self.sum_size {
            return Err(Error::RankOutOfRange { value: code, size: self.sum_size });
        }
        let base = self.sum_base();
        let coords = (0..self.d)
            .map(|_| {
                let c = code % base;
                code /= base;
                c
            })
            .collect();
        Ok(SumPoint { coords })
    }

    pub fn check_point(&self, p: &GridPoint) -> Result<()> {
        if p.coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.coords.len() });
        }
        for (index, &c) in p.coords.iter().enumerate() {
            if c >= self.n {
                return Err(Error::CoordinateOutOfRange { index, value: c as i64, n: self.n });
            }
        }
        Ok(())
    }

    pub fn check_rank(&self, rank: u64) -> Result<()> {
        if rank >= self.size {
            return Err(Error::RankOutOfRange { value: rank, size: self.size });
        }
        Ok(())
    }
}

impl fmt::Display for GridParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]^{}", self.n, self.d)
    }
}

/// A grid point; coordinates are validated against a [`GridParams`] wherever
/// a point enters a set or is ranked.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GridPoint {
    coords: Vec<u64>,
}

impl GridPoint {
    pub fn new(coords: Vec<u64>, grid: &GridParams) -> Result<Self> {
        let p = GridPoint { coords };
        grid.check_point(&p)?;
        Ok(p)
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Coordinatewise sum.
    pub fn add(&self, other: &GridPoint) -> SumPoint {
        SumPoint { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A point of `[0, 2n-2]^d`, the range of pairwise sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SumPoint {
    coords: Vec<u64>,
}

impl SumPoint {
    pub fn new(coords: Vec<u64>) -> Self {
        SumPoint { coords }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// A set of grid points stored as sorted, deduplicated ranks.
///
/// Serializes as the rank list `{"n", "d", "ranks"}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet", into = "RawPointSet")]
pub struct PointSet {
    grid: GridParams,
    ranks: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawPointSet {
    n: u64,
    d: u32,
    ranks: Vec<u64>,
}

impl TryFrom<RawPointSet> for PointSet {
    type Error = Error;
    fn try_from(raw: RawPointSet) -> Result<Self> {
        PointSet::from_ranks(GridParams::new(raw.n, raw.d)?, raw.ranks)
    }
}

impl From<PointSet> for RawPointSet {
    fn from(s: PointSet) -> Self {
        RawPointSet { n: s.grid.n, d: s.grid.d, ranks: s.ranks }
    }
}

impl PointSet {
    pub fn empty(grid: GridParams) -> Self {
        PointSet { grid, ranks: Vec::new() }
    }

    pub fn full(grid: GridParams) -> Self {
        PointSet { grid, ranks: (0..grid.size()).collect() }
    }

    pub fn from_ranks(grid: GridParams, ranks: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut ranks: Vec<u64> = ranks.into_iter().collect();
        for &r in &ranks {
            grid.check_rank(r)?;
        }
        ranks.sort_unstable();
        ranks.dedup();
        Ok(PointSet { grid, ranks })
    }

    pub fn from_points<'a>(grid: GridParams, points: impl IntoIterator<Item = &'a GridPoint>) -> Result<Self> {
        let ranks = points.into_iter().map(|p| grid.rank(p)).collect::<Result<Vec<_>>>()?;
        PointSet::from_ranks(grid, ranks)
    }

    /// Builds a set from sorted, deduplicated, in-range ranks.
    pub(crate) fn from_sorted_unchecked(grid: GridParams, ranks: Vec<u64>) -> Self {
        debug_assert!(ranks.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(ranks.last().is_none_or(|&r| r < grid.size()));
        PointSet { grid, ranks }
    }

    pub fn grid(&self) -> GridParams {
        self.grid
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn into_ranks(self) -> Vec<u64> {
        self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn contains(&self, rank: u64) -> bool {
        self.ranks.binary_search(&rank).is_ok()
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        self.ranks.iter().map(|&r| {
            let mut coords = vec![0; self.grid.dim()];
            self.grid.write_coords(r, &mut coords);
            GridPoint { coords }
        })
    }

    /// Flat coordinate table, `len() * d` entries.
    pub fn coord_table(&self) -> Vec<u64> {
        let d = self.grid.dim();
        let mut out = vec![0; self.ranks.len() * d];
        for (chunk, &r) in out.chunks_mut(d).zip(&self.ranks) {
            self.grid.write_coords(r, chunk);
        }
        out
    }

    /// Grid points not in this set.
    pub fn complement(&self) -> PointSet {
        let mut out = Vec::with_capacity((self.grid.size() as usize).saturating_sub(self.len()));
        let mut it = self.ranks.iter().peekable();
        for r in 0..self.grid.size() {
            if it.peek() == Some(&&r) {
                it.next();
            } else {
                out.push(r);
            }
        }
        PointSet { grid: self.grid, ranks: out }
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.grid == other.grid && self.ranks.iter().all(|&r| other.contains(r))
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.ranks.iter().all(|&r| !other.contains(r))
    }

    /// Translate by `v`; `None` if any image leaves the grid.
    pub fn translate(&self, v: &[i64]) -> Option<PointSet> {
        let d = self.grid.dim();
        if v.len() != d {
            return None;
        }
        let n = self.grid.n() as i64;
        let mut ranks = Vec::with_capacity(self.len());
        let mut coords = vec![0u64; d];
        for &r in &self.ranks {
            self.grid.write_coords(r, &mut coords);
            let mut rank: i64 = 0;
            for i in (0..d).rev() {
                let c = coords[i] as i64 + v[i];
                if c < 0 || c >= n {
                    return None;
                }
                rank = rank * n + c;
            }
            ranks.push(rank as u64);
        }
        ranks.sort_unstable();
        Some(PointSet { grid: self.grid, ranks })
    }
}
