use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::dense_sidon_in_grid;
use crate::error::{Error, Result};
use crate::exact::{greedy_sidon_in_order, greedy_sidon_subset, max_sidon_subset, max_sidon_subset_with};
use crate::grid::PointSet;

/// Samples up to this size are solved exactly in [`EstimateMode::Auto`].
pub const AUTO_EXACT_LIMIT: usize = 400;

/// Default node budget of the exact search.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMode {
    /// Bounded exact search.
    Exact,
    /// Heuristic incumbent, then bounded exact search.
    Hybrid,
    /// One greedy pass in random order.
    Greedy,
    /// `Exact` up to [`AUTO_EXACT_LIMIT`] points, `Hybrid` beyond.
    #[default]
    Auto,
}

impl fmt::Display for EstimateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimateMode::Exact => "exact",
            EstimateMode::Hybrid => "hybrid",
            EstimateMode::Greedy => "greedy",
            EstimateMode::Auto => "auto",
        })
    }
}

impl FromStr for EstimateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(EstimateMode::Exact),
            "hybrid" => Ok(EstimateMode::Hybrid),
            "greedy" => Ok(EstimateMode::Greedy),
            "auto" => Ok(EstimateMode::Auto),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}' (exact, hybrid, greedy, auto)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverStatus {
    /// The lower bound is proven maximum.
    Optimal,
    /// The exact search ran out of nodes.
    BudgetExhausted,
    /// No exact search was attempted.
    Heuristic,
}

impl fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverStatus::Optimal => "optimal",
            SolverStatus::BudgetExhausted => "budget-exhausted",
            SolverStatus::Heuristic => "heuristic",
        })
    }
}

/// `F(R)` bracket: `f_lower ≤ F(R)`, and `f_exact = Some(F(R))` exactly when
/// the status is `Optimal`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Estimate {
    pub f_lower: usize,
    pub f_exact: Option<usize>,
    pub status: SolverStatus,
    pub witness: PointSet,
    pub nodes_explored: u64,
}

impl Estimate {
    fn new(witness: PointSet, sample_size: usize, optimal: bool, searched: bool, nodes: u64) -> Self {
        // Keeping every point is optimal without a search.
        let optimal = optimal || witness.len() == sample_size;
        let status = match (optimal, searched) {
            (true, _) => SolverStatus::Optimal,
            (false, true) => SolverStatus::BudgetExhausted,
            (false, false) => SolverStatus::Heuristic,
        };
        Estimate {
            f_lower: witness.len(),
            f_exact: optimal.then_some(witness.len()),
            status,
            witness,
            nodes_explored: nodes,
        }
    }
}

/// Greedy pass over `r` in a uniformly random order.
pub fn random_greedy<R: Rng + ?Sized>(r: &PointSet, rng: &mut R) -> PointSet {
    let mut order: Vec<usize> = (0..r.len()).collect();
    order.shuffle(rng);
    greedy_sidon_in_order(r, &order)
}

/// Best of a random greedy pass, a rank-order greedy pass and the explicit
/// construction restricted to `r`.
fn incumbent<R: Rng + ?Sized>(r: &PointSet, rng: &mut R) -> PointSet {
    let construction = dense_sidon_in_grid(&r.grid());
    let restricted: Vec<u64> = construction.ranks().iter().copied().filter(|&x| r.contains(x)).collect();
    let restricted = PointSet::from_sorted_unchecked(r.grid(), restricted);
    [random_greedy(r, rng), greedy_sidon_subset(r), restricted]
        .into_iter()
        .reduce(|best, s| if s.len() > best.len() { s } else { best })
        .expect("three candidates")
}

/// Largest Sidon subset of `r` found under `mode`; `budget` caps exact search
/// nodes (`0` = unlimited) and `rng` drives the randomized passes.
pub fn estimate_f<R: Rng + ?Sized>(r: &PointSet, budget: u64, mode: EstimateMode, rng: &mut R) -> Estimate {
    let mode = match mode {
        EstimateMode::Auto if r.len() <= AUTO_EXACT_LIMIT => EstimateMode::Exact,
        EstimateMode::Auto => EstimateMode::Hybrid,
        m => m,
    };
    match mode {
        EstimateMode::Greedy => Estimate::new(random_greedy(r, rng), r.len(), false, false, 0),
        EstimateMode::Exact => {
            let res = max_sidon_subset(r, budget);
            Estimate::new(res.witness, r.len(), res.optimal, true, res.nodes_explored)
        }
        EstimateMode::Hybrid | EstimateMode::Auto => {
            let start = incumbent(r, rng);
            if start.len() == r.len() {
                return Estimate::new(start, r.len(), true, false, 0);
            }
            let res = max_sidon_subset_with(r, budget, &start);
            Estimate::new(res.witness, r.len(), res.optimal, true, res.nodes_explored)
        }
    }
}
