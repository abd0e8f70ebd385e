use serde::{Deserialize, Serialize};

use super::estimate::{EstimateMode, DEFAULT_NODE_BUDGET};
use super::sample::SampleSpec;
use super::sweep::{run_trials, ExperimentRecord};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::grid::GridParams;

/// The four ranges of `p` with distinct growth of `F([n]^d_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `n^{-d} < p ≤ 2n^{-2d/3}`: `F` is linear in `n^d·p`.
    Sparse,
    /// `2n^{-2d/3} ≤ p ≤ n^{-d/3-ε}`: `n^{d/3}·log(n^{2d}p³)^{1/3}`.
    Middle,
    /// `n^{-d/3-ε} ≤ p ≤ n^{-d/3}(log n)^{8/3}`: between `n^{d/3}(log n)^{1/3}`
    /// and `n^{d/3}(log n)^{4/3}`.
    MiddleLarge,
    /// `n^{-d/3}(log n)^{8/3} ≤ p ≤ 1`: `n^{d/2}·p^{1/2}`.
    Dense,
}

impl Regime {
    /// Closed range of `p`, except that the sparse range is open at `n^{-d}`.
    pub fn range(self, n: u64, d: u32, epsilon: f64) -> (f64, f64) {
        let (n, d) = (n as f64, f64::from(d));
        let log_n = n.ln();
        match self {
            Regime::Sparse => (n.powf(-d), 2.0 * n.powf(-2.0 * d / 3.0)),
            Regime::Middle => (2.0 * n.powf(-2.0 * d / 3.0), n.powf(-d / 3.0 - epsilon)),
            Regime::MiddleLarge => (n.powf(-d / 3.0 - epsilon), n.powf(-d / 3.0) * log_n.powf(8.0 / 3.0)),
            Regime::Dense => (n.powf(-d / 3.0) * log_n.powf(8.0 / 3.0), 1.0),
        }
    }

    fn contains(self, n: u64, d: u32, epsilon: f64, p: f64) -> bool {
        let (lo, hi) = self.range(n, d, epsilon);
        match self {
            Regime::Sparse => p > lo && p <= hi,
            _ => p >= lo && p <= hi,
        }
    }

    /// `(lower, upper)` envelopes without constants.
    pub fn envelopes(self, n: u64, d: u32, p: f64) -> (f64, f64) {
        let (nf, df) = (n as f64, f64::from(d));
        let log_n = nf.ln();
        let mean = nf.powf(df) * p;
        match self {
            Regime::Sparse => (mean / 3.0, mean),
            Regime::Middle => {
                let e = nf.powf(df / 3.0) * (2.0 * df * log_n + 3.0 * p.ln()).cbrt();
                (e, e)
            }
            Regime::MiddleLarge => {
                let base = nf.powf(df / 3.0);
                (base * log_n.cbrt(), base * log_n.powf(4.0 / 3.0))
            }
            Regime::Dense => {
                let e = nf.powf(df / 2.0) * p.sqrt();
                (e, e)
            }
        }
    }
}

/// Every regime whose range contains `p`; on a shared boundary both.
pub fn classify_regimes(n: u64, d: u32, p: f64, epsilon: f64) -> Result<Vec<Regime>> {
    if n < 2 {
        return Err(Error::InvalidParameter("regimes need n ≥ 2".into()));
    }
    if !(epsilon > 0.0 && epsilon < f64::from(d) / 3.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, d/3), got {epsilon}")));
    }
    let found: Vec<Regime> = [Regime::Sparse, Regime::Middle, Regime::MiddleLarge, Regime::Dense]
        .into_iter()
        .filter(|r| r.contains(n, d, epsilon, p))
        .collect();
    if found.is_empty() {
        return Err(Error::InvalidParameter(format!("p={p} lies in no regime for n={n}, d={d}")));
    }
    Ok(found)
}

/// Multipliers of the envelopes; index `2i`/`2i+1` are the lower/upper
/// constants of the middle, middle-large and dense regimes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeConstants(pub [f64; 6]);

impl Default for RegimeConstants {
    fn default() -> Self {
        RegimeConstants([1.0; 6])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeBracket {
    pub regime: Regime,
    pub p_range: (f64, f64),
    /// Envelopes times their constants.
    pub lower: f64,
    pub upper: f64,
    /// Measured ratios `mean F / envelope` (constants excluded).
    pub c_lower_hat: f64,
    pub c_upper_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub n: u64,
    pub d: u32,
    pub p: f64,
    pub epsilon: f64,
    pub trials: u64,
    pub mean_sample_size: f64,
    pub mean_f: f64,
    /// Trials whose `F` is proven.
    pub optimal_trials: u64,
    pub brackets: Vec<RegimeBracket>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeOptions {
    /// Defaults to `d/9`.
    pub epsilon: Option<f64>,
    pub constants: RegimeConstants,
    pub trials: u64,
    pub seed: u64,
    pub mode: EstimateMode,
    pub budget: u64,
}

impl Default for RegimeOptions {
    fn default() -> Self {
        RegimeOptions {
            epsilon: None,
            constants: RegimeConstants::default(),
            trials: 16,
            seed: 0,
            mode: EstimateMode::Auto,
            budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Places `p` in its regime(s), evaluates the envelopes and compares them
/// with the mean `F` over sampled trials.
pub fn regime_bounds_report(
    n: u64,
    d: u32,
    p: f64,
    opts: &RegimeOptions,
    executor: &Executor,
) -> Result<(RegimeReport, Vec<ExperimentRecord>)> {
    let epsilon = opts.epsilon.unwrap_or(f64::from(d) / 9.0);
    let regimes = classify_regimes(n, d, p, epsilon)?;
    let spec = SampleSpec::new(GridParams::new(n, d)?, p, opts.seed, opts.trials)?;
    let records = run_trials(&spec, opts.mode, opts.budget, false, executor, &mut |_| Ok(()))?;
    let trials = records.len().max(1) as f64;
    let mean_f = records.iter().map(|r| r.f_lower as f64).sum::<f64>() / trials;
    let mean_sample_size = records.iter().map(|r| r.sample_size as f64).sum::<f64>() / trials;
    let c = opts.constants.0;
    let brackets = regimes
        .into_iter()
        .map(|regime| {
            let (lo, hi) = regime.envelopes(n, d, p);
            let (cl, cu) = match regime {
                Regime::Sparse => (1.0, 1.0),
                Regime::Middle => (c[0], c[1]),
                Regime::MiddleLarge => (c[2], c[3]),
                Regime::Dense => (c[4], c[5]),
            };
            RegimeBracket {
                regime,
                p_range: regime.range(n, d, epsilon),
                lower: cl * lo,
                upper: cu * hi,
                c_lower_hat: mean_f / lo,
                c_upper_hat: mean_f / hi,
            }
        })
        .collect();
    let report = RegimeReport {
        n,
        d,
        p,
        epsilon,
        trials: opts.trials,
        mean_sample_size,
        mean_f,
        optimal_trials: records.iter().filter(|r| r.f_exact.is_some()).count() as u64,
        brackets,
    };
    Ok((report, records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let eps = 1.0 / 9.0;
        // The dense range is nonempty only once n^{1/8} > ln n.
        let n = 1_000_000_000_000_000u64;
        let nf = n as f64;
        assert_eq!(classify_regimes(n, 1, nf.powf(-0.9), eps).unwrap(), vec![Regime::Sparse]);
        assert_eq!(classify_regimes(n, 1, nf.powf(-0.5), eps).unwrap(), vec![Regime::Middle]);
        assert_eq!(classify_regimes(n, 1, nf.powf(-0.35), eps).unwrap(), vec![Regime::MiddleLarge]);
        assert_eq!(classify_regimes(n, 1, 0.5, eps).unwrap(), vec![Regime::Dense]);
        let boundary = 2.0 * nf.powf(-2.0 / 3.0);
        assert_eq!(classify_regimes(n, 1, boundary, eps).unwrap(), vec![Regime::Sparse, Regime::Middle]);
        let dense_from = nf.powf(-1.0 / 3.0) * nf.ln().powf(8.0 / 3.0);
        assert_eq!(classify_regimes(n, 1, dense_from, eps).unwrap(), vec![Regime::MiddleLarge, Regime::Dense]);
        assert!(classify_regimes(n, 1, 1.0 / nf, eps).is_err());
        assert!(classify_regimes(n, 1, 0.5, 0.4).is_err());
        assert!(classify_regimes(1, 1, 0.5, eps).is_err());
    }

    #[test]
    fn ranges_cover_every_probability() {
        for (n, d) in [(2u64, 1u32), (10, 1), (64, 1), (512, 1), (20, 2), (7, 3), (100_000, 1)] {
            let lo = (n as f64).powf(-f64::from(d));
            for i in 1..=400 {
                let p = lo * (1.0 / lo).powf(i as f64 / 400.0);
                assert!(classify_regimes(n, d, p.min(1.0), f64::from(d) / 9.0).is_ok(), "n={n} d={d} p={p}");
            }
        }
    }

    #[test]
    fn sparse_samples_are_nearly_sidon() {
        let opts = RegimeOptions { trials: 32, seed: 3, ..RegimeOptions::default() };
        let p = 2000f64.powf(-0.9);
        let (report, records) = regime_bounds_report(2000, 1, p, &opts, &Executor::sequential()).unwrap();
        assert_eq!(report.brackets[0].regime, Regime::Sparse);
        assert_eq!(report.optimal_trials, 32);
        for r in &records {
            assert!(r.f_lower + 1 >= r.sample_size);
        }
        let b = &report.brackets[0];
        assert!(b.c_upper_hat <= 1.5 && b.c_lower_hat > 1.0, "{b:?}");
    }

    #[test]
    fn envelope_values() {
        let (lo, hi) = Regime::Dense.envelopes(100, 2, 0.25);
        assert!((lo - 50.0).abs() < 1e-9 && lo == hi);
        let (lo, hi) = Regime::Sparse.envelopes(10, 1, 0.3);
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 3.0).abs() < 1e-12);
        let (lo, _) = Regime::Middle.envelopes(1000, 1, 0.01);
        // n^{1/3}·ln(n²p³)^{1/3} with n²p³ = 1.
        assert!(lo.abs() < 1e-6);
    }
}
