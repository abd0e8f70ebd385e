use serde::{Deserialize, Serialize};

use super::sample::{sample_grid, SampleSpec};
use crate::error::{Error, Result};
use crate::exec::Executor;

/// `2·exp(-λ²·E/3)`: the two-sided tail bound for `|X - E| ≥ λE`.
pub fn chernoff_ceiling(lambda: f64, expected: f64) -> f64 {
    2.0 * (-lambda * lambda * expected / 3.0).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffReport {
    pub lambda: f64,
    pub expected: f64,
    pub trials: u64,
    /// Trials with `||R| - E| ≥ λE`.
    pub failures: u64,
    pub empirical: f64,
    pub ceiling: f64,
    /// Binomial standard error at rate `min(ceiling, 1)`.
    pub stderr: f64,
    /// `empirical ≤ ceiling + 3·stderr`.
    pub pass: bool,
}

/// Measures the deviation frequency of `|R|` over the trials of `spec`.
pub fn chernoff_check(spec: &SampleSpec, lambda: f64, executor: &Executor) -> Result<ChernoffReport> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let expected = spec.expected_size();
    let deviates = executor
        .map((0..spec.trials).collect(), |t| (sample_grid(spec, t).len() as f64 - expected).abs() >= lambda * expected);
    let failures = deviates.iter().filter(|&&f| f).count() as u64;
    let empirical = if spec.trials == 0 { 0.0 } else { failures as f64 / spec.trials as f64 };
    let ceiling = chernoff_ceiling(lambda, expected);
    let rate = ceiling.min(1.0);
    let stderr = if spec.trials == 0 { 0.0 } else { (rate * (1.0 - rate) / spec.trials as f64).sqrt() };
    Ok(ChernoffReport {
        lambda,
        expected,
        trials: spec.trials,
        failures,
        empirical,
        ceiling,
        stderr,
        pass: empirical <= ceiling + 3.0 * stderr,
    })
}
