//! Monte Carlo experiments on random grid subsets `[n]^d_p`: sampling,
//! maximum-Sidon estimation, exponent fits, concentration and the
//! interval-to-grid transfer.
//!
//! Every trial is reproducible from `(seed, n, d, trial)` alone, and all
//! parallel work goes through [`Executor::map`](crate::Executor::map), so
//! outputs do not depend on the thread count.

mod chernoff;
mod estimate;
mod fit;
mod regime;
mod sample;
mod sweep;
mod transfer;

pub use chernoff::{chernoff_ceiling, chernoff_check, ChernoffReport};
pub use estimate::{
    estimate_f, random_greedy, Estimate, EstimateMode, SolverStatus, AUTO_EXACT_LIMIT, DEFAULT_NODE_BUDGET,
};
pub use fit::{b_of_a, exponent_curve, fit_exponent, CurvePoint, ExponentFit, MIN_FIT_POINTS, MIN_TRIALS_PER_N};
pub use regime::{
    classify_regimes, regime_bounds_report, Regime, RegimeBracket, RegimeConstants, RegimeOptions, RegimeReport,
};
pub use sample::{sample_grid, trial_rng, SampleSpec};
pub use sweep::{run_sweep, run_trial, run_trials, ExperimentRecord, SweepConfig, RECORD_HEADER};
pub use transfer::{transfer_check, transfer_pair, TransferPair, TransferReport};
