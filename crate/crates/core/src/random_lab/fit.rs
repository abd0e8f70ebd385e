use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sweep::ExperimentRecord;
use crate::error::{Error, Result};

/// Minimum number of distinct `n` in a fit.
pub const MIN_FIT_POINTS: usize = 4;

/// Minimum trials per `n` in a fit.
pub const MIN_TRIALS_PER_N: usize = 8;

/// Exponent `b(a)` of `F([n]^d_p) = n^{b+o(1)}` for `p = n^a`, `-d < a ≤ 0`.
pub fn b_of_a(a: f64, d: u32) -> Result<f64> {
    let d = f64::from(d);
    if !(a > -d && a <= 0.0) {
        return Err(Error::InvalidParameter(format!("exponent a must lie in (-{d}, 0], got {a}")));
    }
    Ok(if a <= -2.0 * d / 3.0 {
        a + d
    } else if a <= -d / 3.0 {
        d / 3.0
    } else {
        (a + d) / 2.0
    })
}

/// Least-squares slope of mean `ln F` against `ln n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub a: f64,
    pub d: u32,
    pub n_values: Vec<u64>,
    pub b_hat: f64,
    pub stderr: f64,
    pub b_predicted: f64,
    pub gap: f64,
}

/// A point of the `b(a)` curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub a: f64,
    pub b_hat: f64,
    pub b_predicted: f64,
}

fn record_exponent(r: &ExperimentRecord) -> f64 {
    r.a.unwrap_or_else(|| r.p.ln() / (r.n as f64).ln())
}

/// Fits the records of one `(d, a)` sweep. Per `n` the mean of `ln F` is
/// taken over trials with `F > 0` (empty samples have no logarithm); an `n`
/// whose trials are all zero is dropped.
pub fn fit_exponent(records: &[ExperimentRecord]) -> Result<ExponentFit> {
    let first = records.first().ok_or_else(|| Error::InsufficientData("no records".into()))?;
    let (a, d) = (record_exponent(first), first.d);
    let mut by_n: BTreeMap<u64, (usize, Vec<f64>)> = BTreeMap::new();
    for r in records {
        if r.d != d || (record_exponent(r) - a).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "records mix sweeps: (d={d}, a={a}) and (d={}, a={})",
                r.d,
                record_exponent(r)
            )));
        }
        let entry = by_n.entry(r.n).or_default();
        entry.0 += 1;
        if r.f_lower > 0 {
            entry.1.push((r.f_lower as f64).ln());
        }
    }
    if let Some((n, (trials, _))) = by_n.iter().find(|(_, (t, _))| *t < MIN_TRIALS_PER_N) {
        return Err(Error::InsufficientData(format!("n={n} has {trials} trials, need {MIN_TRIALS_PER_N}")));
    }
    let points: Vec<(u64, f64, f64)> = by_n
        .iter()
        .filter(|(_, (_, logs))| !logs.is_empty())
        .map(|(&n, (_, logs))| (n, (n as f64).ln(), logs.iter().sum::<f64>() / logs.len() as f64))
        .collect();
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} distinct n with nonzero F, need {MIN_FIT_POINTS}",
            points.len()
        )));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.1).sum::<f64>() / k;
    let my = points.iter().map(|p| p.2).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.1 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.1 - mx) * (p.2 - my)).sum();
    let b_hat = sxy / sxx;
    let ssr: f64 = points.iter().map(|p| (p.2 - my - b_hat * (p.1 - mx)).powi(2)).sum();
    let stderr = (ssr / (k - 2.0) / sxx).sqrt();
    let b_predicted = b_of_a(a, d)?;
    Ok(ExponentFit {
        a,
        d,
        n_values: points.iter().map(|p| p.0).collect(),
        b_hat,
        stderr,
        b_predicted,
        gap: (b_hat - b_predicted).abs(),
    })
}

/// One fit per exponent present in `records`, in increasing `a`.
pub fn exponent_curve(records: &[ExperimentRecord]) -> Result<Vec<CurvePoint>> {
    let mut groups: Vec<(f64, Vec<ExperimentRecord>)> = Vec::new();
    for r in records {
        let a = record_exponent(r);
        match groups.iter_mut().find(|(ga, _)| (ga - a).abs() <= 1e-9) {
            Some((_, g)) => g.push(r.clone()),
            None => groups.push((a, vec![r.clone()])),
        }
    }
    groups.sort_by(|x, y| x.0.total_cmp(&y.0));
    groups
        .iter()
        .map(|(_, g)| fit_exponent(g).map(|f| CurvePoint { a: f.a, b_hat: f.b_hat, b_predicted: f.b_predicted }))
        .collect()
}
