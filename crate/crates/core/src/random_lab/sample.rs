use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridParams, PointSet};

/// Parameters of `[n]^d_p` trials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub grid: GridParams,
    /// Inclusion probability, in `(0, 1]`.
    pub p: f64,
    /// Exponent with `p = n^a`, when the sample was configured by one.
    pub a: Option<f64>,
    pub seed: u64,
    pub trials: u64,
}

impl SampleSpec {
    pub fn new(grid: GridParams, p: f64, seed: u64, trials: u64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidParameter(format!("p must lie in (0, 1], got {p}")));
        }
        Ok(SampleSpec { grid, p, a: None, seed, trials })
    }

    /// `p = n^a` with `-d < a ≤ 0`.
    pub fn with_exponent(grid: GridParams, a: f64, seed: u64, trials: u64) -> Result<Self> {
        let d = f64::from(grid.d());
        if !(a > -d && a <= 0.0) {
            return Err(Error::InvalidParameter(format!("exponent a must lie in (-{d}, 0], got {a}")));
        }
        let p = (grid.n() as f64).powf(a).min(1.0);
        Ok(SampleSpec { a: Some(a), ..SampleSpec::new(grid, p, seed, trials)? })
    }

    /// `E|R| = n^d·p`.
    pub fn expected_size(&self) -> f64 {
        self.grid.size() as f64 * self.p
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The generator of trial `trial`: ChaCha8 keyed by `(seed, n, d)` on stream
/// `trial`, so every trial is reproducible on its own.
pub fn trial_rng(seed: u64, grid: &GridParams, trial: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(splitmix64(seed) ^ grid.n()) ^ u64::from(grid.d()));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(trial);
    rng
}

/// Keeps each rank in order with probability `p`, one draw per point.
pub(crate) fn bernoulli_ranks(rng: &mut ChaCha8Rng, size: u64, p: f64) -> Vec<u64> {
    if p >= 1.0 {
        return (0..size).collect();
    }
    // u < ⌊p·2^64⌋ has probability p up to 2^-64.
    let threshold = (p * 2f64.powi(64)) as u64;
    (0..size).filter(|_| rng.random::<u64>() < threshold).collect()
}

/// Trial `trial` of `[n]^d_p`, and the generator positioned after the draw.
pub(crate) fn sample_with_rng(spec: &SampleSpec, trial: u64) -> (PointSet, ChaCha8Rng) {
    let mut rng = trial_rng(spec.seed, &spec.grid, trial);
    let ranks = bernoulli_ranks(&mut rng, spec.grid.size(), spec.p);
    (PointSet::from_sorted_unchecked(spec.grid, ranks), rng)
}

/// Trial `trial` of `[n]^d_p`.
pub fn sample_grid(spec: &SampleSpec, trial: u64) -> PointSet {
    sample_with_rng(spec, trial).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u64, d: u32, p: f64, seed: u64) -> SampleSpec {
        SampleSpec::new(GridParams::new(n, d).unwrap(), p, seed, 1).unwrap()
    }

    #[test]
    fn spec_validation() {
        let g = GridParams::new(10, 2).unwrap();
        assert!(SampleSpec::new(g, 0.0, 0, 1).is_err());
        assert!(SampleSpec::new(g, 1.5, 0, 1).is_err());
        assert!(SampleSpec::new(g, f64::NAN, 0, 1).is_err());
        assert!(SampleSpec::with_exponent(g, -2.0, 0, 1).is_err());
        assert!(SampleSpec::with_exponent(g, 0.1, 0, 1).is_err());
        let s = SampleSpec::with_exponent(g, -0.5, 0, 1).unwrap();
        assert!((s.p - 10f64.powf(-0.5)).abs() < 1e-15);
        assert_eq!(SampleSpec::with_exponent(g, 0.0, 0, 1).unwrap().p, 1.0);
    }

    #[test]
    fn extreme_probabilities() {
        let full = sample_grid(&spec(6, 2, 1.0, 3), 0);
        assert_eq!(full, PointSet::full(GridParams::new(6, 2).unwrap()));
        for trial in 0..20 {
            assert!(sample_grid(&spec(10, 2, 1e-12, 3), trial).is_empty());
        }
    }

    #[test]
    fn trials_are_reproducible_and_distinct() {
        let s = spec(10, 1, 0.5, 42);
        assert_eq!(sample_grid(&s, 7), sample_grid(&s, 7));
        let distinct: std::collections::HashSet<Vec<u64>> = (0..50).map(|t| sample_grid(&s, t).into_ranks()).collect();
        assert!(distinct.len() > 30);
        assert_ne!(trial_rng(1, &s.grid, 0).random::<u64>(), trial_rng(2, &s.grid, 0).random::<u64>());
        let other = GridParams::new(11, 1).unwrap();
        assert_ne!(trial_rng(1, &s.grid, 0).random::<u64>(), trial_rng(1, &other, 0).random::<u64>());
    }

    #[test]
    fn mean_size_within_three_sigma() {
        // |R| ~ Bin(10, 1/2): the mean over 10^4 seeds has sd sqrt(2.5/10^4).
        let total: usize = (0..10_000).map(|seed| sample_grid(&spec(10, 1, 0.5, seed), 0).len()).sum();
        let mean = total as f64 / 10_000.0;
        assert!((mean - 5.0).abs() <= 3.0 * (2.5f64 / 10_000.0).sqrt(), "mean {mean}");
    }
}
