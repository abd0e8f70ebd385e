use serde::{Deserialize, Serialize};

use super::sample::{sample_grid, SampleSpec};
use crate::constructions::lift_sidon;
use crate::error::Result;
use crate::exact::max_sidon_subset;
use crate::exec::Executor;
use crate::grid::GridParams;
use crate::sidon::is_sidon;

/// One coupled pair: `R₁ ⊆ [n^d]` and its image `R₂ ⊆ [n]^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferPair {
    pub trial: u64,
    pub sample_size: usize,
    pub f_interval: usize,
    pub f_grid: usize,
    /// Both maxima proven.
    pub resolved: bool,
    /// The image of the interval witness is a Sidon subset of `R₂`.
    pub image_sidon: bool,
}

impl TransferPair {
    pub fn holds(&self) -> bool {
        self.image_sidon && (!self.resolved || self.f_grid >= self.f_interval)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub n: u64,
    pub d: u32,
    pub p: f64,
    pub seed: u64,
    pub pairs: u64,
    pub violations: u64,
    /// Pairs where a search ran out of budget.
    pub unresolved: u64,
    /// Resolved pairs with `F(R₂) = F(R₁)`.
    pub equal: u64,
    pub first_violation: Option<TransferPair>,
    /// No violations and every pair resolved.
    pub pass: bool,
}

/// Samples `R₁ ⊆ [n^d]` with one draw per integer, sets `R₂ = φ_d(R₁)` and
/// compares exact maxima on both sides.
pub fn transfer_pair(n: u64, d: u32, p: f64, seed: u64, trial: u64, budget: u64) -> Result<TransferPair> {
    let grid = GridParams::new(n, d)?;
    let interval = SampleSpec::new(GridParams::interval(grid.size())?, p, seed, trial + 1)?;
    let r1 = sample_grid(&interval, trial);
    let r2 = lift_sidon(r1.ranks(), &grid)?;
    let m1 = max_sidon_subset(&r1, budget);
    let m2 = max_sidon_subset(&r2, budget);
    let image = lift_sidon(m1.witness.ranks(), &grid)?;
    Ok(TransferPair {
        trial,
        sample_size: r1.len(),
        f_interval: m1.size,
        f_grid: m2.size,
        resolved: m1.optimal && m2.optimal,
        image_sidon: is_sidon(&image).verdict && image.is_subset_of(&r2),
    })
}

pub fn transfer_check(
    n: u64,
    d: u32,
    p: f64,
    trials: u64,
    seed: u64,
    budget: u64,
    executor: &Executor,
) -> Result<TransferReport> {
    SampleSpec::new(GridParams::new(n, d)?, p, seed, trials)?;
    let pairs = executor.map((0..trials).collect(), |t| transfer_pair(n, d, p, seed, t, budget));
    let pairs = pairs.into_iter().collect::<Result<Vec<_>>>()?;
    let violations = pairs.iter().filter(|x| !x.holds()).count() as u64;
    let unresolved = pairs.iter().filter(|x| !x.resolved).count() as u64;
    Ok(TransferReport {
        n,
        d,
        p,
        seed,
        pairs: trials,
        violations,
        unresolved,
        equal: pairs.iter().filter(|x| x.resolved && x.f_grid == x.f_interval).count() as u64,
        first_violation: pairs.iter().find(|x| !x.holds()).cloned(),
        pass: violations == 0 && unresolved == 0,
    })
}
