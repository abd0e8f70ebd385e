use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::estimate::{estimate_f, EstimateMode, SolverStatus, DEFAULT_NODE_BUDGET};
use super::sample::{sample_with_rng, SampleSpec};
use crate::error::Result;
use crate::exec::Executor;
use crate::grid::GridParams;

/// Column order of the record CSV.
pub const RECORD_HEADER: [&str; 11] =
    ["n", "d", "p", "a", "seed", "trial", "sample_size", "F_lower", "F_exact", "status", "elapsed_s"];

/// Trials per parallel batch; records reach the sink after each batch.
const SWEEP_BATCH: u64 = 64;

/// One trial: `F_lower ≤ sample_size`, and `F_exact`, when present, equals
/// `F_lower`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: u64,
    pub d: u32,
    pub p: f64,
    pub a: Option<f64>,
    pub seed: u64,
    pub trial: u64,
    pub sample_size: usize,
    #[serde(rename = "F_lower")]
    pub f_lower: usize,
    #[serde(rename = "F_exact")]
    pub f_exact: Option<usize>,
    pub status: SolverStatus,
    /// Wall time, only when timing was requested (it breaks byte-identical
    /// output).
    pub elapsed_s: Option<f64>,
}

/// Runs trial `trial` of `spec`: sample, then estimate.
pub fn run_trial(spec: &SampleSpec, trial: u64, mode: EstimateMode, budget: u64, timing: bool) -> ExperimentRecord {
    let start = Instant::now();
    let (sample, mut rng) = sample_with_rng(spec, trial);
    let est = estimate_f(&sample, budget, mode, &mut rng);
    ExperimentRecord {
        n: spec.grid.n(),
        d: spec.grid.d(),
        p: spec.p,
        a: spec.a,
        seed: spec.seed,
        trial,
        sample_size: sample.len(),
        f_lower: est.f_lower,
        f_exact: est.f_exact,
        status: est.status,
        elapsed_s: timing.then(|| start.elapsed().as_secs_f64()),
    }
}

/// Trials of `spec` in index order, parallel in batches; `sink` sees each
/// record in order as soon as its batch is done.
pub fn run_trials(
    spec: &SampleSpec,
    mode: EstimateMode,
    budget: u64,
    timing: bool,
    executor: &Executor,
    sink: &mut dyn FnMut(&ExperimentRecord) -> Result<()>,
) -> Result<Vec<ExperimentRecord>> {
    let mut out = Vec::with_capacity(spec.trials as usize);
    let mut start = 0;
    while start < spec.trials {
        let end = (start + SWEEP_BATCH).min(spec.trials);
        let batch = executor.map((start..end).collect(), |t| run_trial(spec, t, mode, budget, timing));
        for record in batch {
            sink(&record)?;
            out.push(record);
        }
        start = end;
    }
    Ok(out)
}

/// A sweep over `n` at fixed `d` and exponent `a` (`p = n^a`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub d: u32,
    pub a: f64,
    pub n_values: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    pub mode: EstimateMode,
    pub budget: u64,
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(d: u32, a: f64, n_values: Vec<u64>, trials: u64, seed: u64) -> Self {
        SweepConfig {
            d,
            a,
            n_values,
            trials,
            seed,
            mode: EstimateMode::Auto,
            budget: DEFAULT_NODE_BUDGET,
            timing: false,
        }
    }
}

/// All trials for every `n`, in `(n, trial)` order. Parameters are validated
/// before any trial runs.
pub fn run_sweep(
    cfg: &SweepConfig,
    executor: &Executor,
    sink: &mut dyn FnMut(&ExperimentRecord) -> Result<()>,
) -> Result<Vec<ExperimentRecord>> {
    let specs = cfg
        .n_values
        .iter()
        .map(|&n| SampleSpec::with_exponent(GridParams::new(n, cfg.d)?, cfg.a, cfg.seed, cfg.trials))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for spec in &specs {
        out.extend(run_trials(spec, cfg.mode, cfg.budget, cfg.timing, executor, sink)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::max_sidon_exact;

    fn collect(cfg: &SweepConfig, ex: &Executor) -> Result<Vec<ExperimentRecord>> {
        let mut seen = Vec::new();
        let out = run_sweep(cfg, ex, &mut |r| {
            seen.push(r.clone());
            Ok(())
        })?;
        assert_eq!(seen, out);
        Ok(out)
    }

    #[test]
    fn full_grid_matches_exact_maximum() {
        let cfg = SweepConfig::new(1, 0.0, vec![16, 32, 64], 2, 5);
        let records = collect(&cfg, &Executor::sequential()).unwrap();
        assert_eq!(records.len(), 6);
        for r in &records {
            let exact = max_sidon_exact(&GridParams::interval(r.n).unwrap(), 0);
            assert_eq!(r.sample_size as u64, r.n);
            assert_eq!(r.f_exact, Some(exact.size), "n={}", r.n);
            assert_eq!(r.status, SolverStatus::Optimal);
        }
    }

    #[test]
    fn preconditions_and_empty_runs() {
        assert!(collect(&SweepConfig::new(1, -1.0, vec![16], 1, 0), &Executor::sequential()).is_err());
        assert!(collect(&SweepConfig::new(2, 0.5, vec![16], 1, 0), &Executor::sequential()).is_err());
        assert!(collect(&SweepConfig::new(1, -0.5, vec![16, 32], 0, 0), &Executor::sequential()).unwrap().is_empty());
    }

    #[test]
    fn records_are_consistent_and_thread_independent() {
        let mut cfg = SweepConfig::new(2, -0.7, vec![6, 9], 70, 11);
        cfg.budget = 20_000;
        let seq = collect(&cfg, &Executor::sequential()).unwrap();
        let par = collect(&cfg, &Executor::with_threads(3).unwrap()).unwrap();
        assert_eq!(seq, par);
        for r in &seq {
            assert!(r.f_lower <= r.sample_size);
            assert_eq!(r.f_exact.is_some(), r.status == SolverStatus::Optimal);
            if let Some(f) = r.f_exact {
                assert_eq!(f, r.f_lower);
            }
            assert_eq!(r.elapsed_s, None);
        }
        assert_eq!(seq.iter().map(|r| r.trial).take(70).collect::<Vec<_>>(), (0..70).collect::<Vec<_>>());
    }

    #[test]
    fn record_json_field_names() {
        let spec = SampleSpec::with_exponent(GridParams::interval(8).unwrap(), 0.0, 1, 1).unwrap();
        let json = serde_json::to_value(run_trial(&spec, 0, EstimateMode::Exact, 0, false)).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = RECORD_HEADER.to_vec();
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
        assert_eq!(json["status"], "optimal");
        assert_eq!(json["F_exact"], 4);
    }
}
