//! Closed-form upper bounds on the number of Sidon sets, evaluated as
//! base-2 logarithms in `f64`. Logarithms inside the formulas are natural.

use std::f64::consts::{E, LN_2};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Relative slack for comparisons between quantities that agree exactly in
/// real arithmetic.
const REL_EPS: f64 = 1e-12;

/// `ln C(n, k)` for real `n ≥ k ≥ 0`.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// `log₂ Σ 2^{x_i}`, stable for large exponents.
pub fn log2_sum_exp2(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp2()).sum::<f64>().log2()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInputsLarge {
    pub n: u64,
    pub d: u32,
    pub t: f64,
}

impl BoundInputsLarge {
    /// `s₀ = (d·2^{d+1})^{1/3} n^{d/3} (ln n)^{1/3}`.
    pub fn s0(&self) -> f64 {
        let (n, d) = (self.n as f64, self.d as f64);
        (d * 2f64.powf(d + 1.0)).cbrt() * n.powf(d / 3.0) * n.ln().cbrt()
    }

    pub fn hypothesis_ok(&self) -> bool {
        self.n >= 2 && self.t >= 2.0 * self.s0()
    }

    /// `log₂` of `n^{2(d+1)s₀} (e·2^{d+5} n^d / t²)^t`, hypothesis ignored.
    pub fn log2_formula(&self) -> f64 {
        let (n, d, t) = (self.n as f64, self.d as f64, self.t);
        2.0 * (d + 1.0) * self.s0() * n.log2() + t * (E.log2() + (d + 5.0) + d * n.log2() - 2.0 * t.log2())
    }
}

/// `log₂` of the large-`t` bound on `Z_{n,d}(t)`; requires `t ≥ 2 s₀`.
pub fn bound_large(inp: &BoundInputsLarge) -> Result<f64> {
    if !inp.hypothesis_ok() {
        return Err(Error::Hypothesis(format!(
            "large-t bound needs n >= 2 and t >= 2 s0 = {:.6}, got n={}, t={}",
            2.0 * inp.s0(),
            inp.n,
            inp.t
        )));
    }
    Ok(inp.log2_formula())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInputsSmall {
    pub n: u64,
    pub d: u32,
    pub gamma: f64,
    pub omega: f64,
}

impl BoundInputsSmall {
    /// `s* = 2^{(d+1)/3} n^{d/3} (ln γ)^{1/3}`.
    pub fn s_star(&self) -> f64 {
        let (n, d) = (self.n as f64, self.d as f64);
        2f64.powf((d + 1.0) / 3.0) * n.powf(d / 3.0) * self.gamma.ln().cbrt()
    }

    pub fn t(&self) -> f64 {
        self.omega * self.s_star()
    }

    /// `1 < γ < s*/2^{d+1}` and `ω ≥ 4`. The lower end `γ > 1` keeps `s*`
    /// positive.
    pub fn hypothesis_ok(&self) -> bool {
        self.gamma > 1.0 && self.gamma < self.s_star() / 2f64.powi(self.d as i32 + 1) && self.omega >= 4.0
    }

    /// `log₂` of `(4e n^d / (t γ^{1-2/ω}))^t`, hypothesis ignored.
    pub fn log2_formula(&self) -> f64 {
        let (n, d, t) = (self.n as f64, self.d as f64, self.t());
        let base = 2.0 + E.log2() + d * n.log2() - t.log2() - (1.0 - 2.0 / self.omega) * self.gamma.log2();
        t * base
    }
}

/// `log₂` of the small-`t` bound on `Z_{n,d}(ω s*)`.
pub fn bound_small(inp: &BoundInputsSmall) -> Result<f64> {
    if !inp.hypothesis_ok() {
        return Err(Error::Hypothesis(format!(
            "small-t bound needs 1 < gamma < s*/2^(d+1) = {:.6} and omega >= 4, got gamma={}, omega={}",
            inp.s_star() / 2f64.powi(inp.d as i32 + 1),
            inp.gamma,
            inp.omega
        )));
    }
    let c = c_omega(inp.omega)?;
    if c > 4.0 * E * (1.0 + REL_EPS) {
        return Err(Error::Internal(format!("C_omega = {c} exceeds 4e")));
    }
    Ok(inp.log2_formula())
}

/// `C_ω = e·ω / (ω − 2)^{1 − 2/ω}`, defined for `ω > 2`.
pub fn c_omega(omega: f64) -> Result<f64> {
    if omega <= 2.0 || !omega.is_finite() {
        return Err(Error::InvalidParameter(format!("C_omega needs omega > 2, got {omega}")));
    }
    Ok(E * omega / (omega - 2.0).powf(1.0 - 2.0 / omega))
}

/// `log₂ Σ_{1 ≤ t ≤ T} C(n^d, t)` with `T = ⌊n^{d/3} ln n⌋` (capped at `n^d`).
pub fn bound_small_t_regime(n: u64, d: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("small-t sum needs n >= 3, got {n}")));
    }
    let size = (n as f64).powi(d as i32);
    let t_max = ((n as f64).powf(d as f64 / 3.0) * (n as f64).ln()).floor().min(size) as u64;
    Ok(log2_sum_exp2((1..=t_max).map(|t| ln_binomial(size, t as f64) / LN_2)))
}

/// The sequences `s_k`, `q_k`, `r_k` that grow a seed of size `s₀` to `t`
/// by doubling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingSchedule {
    pub t: f64,
    pub s0: f64,
    /// Largest integer with `t·2^{-K} ≥ s₀`.
    pub k: u32,
    /// `s_1, …, s_{K+1}` with `s_{K+1} = t`.
    pub s: Vec<f64>,
    /// `q_1, …, q_K`.
    pub q: Vec<f64>,
    /// `r_k = s_{k+1} − s_k − q_k`, `k = 1..K`.
    pub r: Vec<f64>,
    /// `⌈q_k⌉`; rounding up keeps `s_k² q_k ≥ s₀³`.
    pub q_ceil: Vec<u64>,
    /// `s_k² q_k ≥ s₀³` for every `k ≤ K`.
    pub growth_ok: bool,
    /// `Σ q_k ≤ (4/3) s₀`.
    pub q_sum_ok: bool,
    /// 1-based indices `k` with `r_k < 0`.
    pub negative_r: Vec<usize>,
}

pub fn schedule(t: f64, s0: f64) -> Result<DoublingSchedule> {
    if !(s0 > 0.0 && s0.is_finite() && t.is_finite()) || t < 2.0 * s0 {
        return Err(Error::Hypothesis(format!("schedule needs t >= 2 s0 > 0, got t={t}, s0={s0}")));
    }
    let mut k = (t / s0).log2().floor().max(1.0) as i32;
    while t * 2f64.powi(-(k + 1)) >= s0 {
        k += 1;
    }
    while k > 1 && t * 2f64.powi(-k) < s0 {
        k -= 1;
    }
    let s: Vec<f64> = (1..=k + 1).map(|i| t * 2f64.powi(-k + i - 1)).collect();
    let q: Vec<f64> = (0..k).map(|i| s0 / 4f64.powi(i)).collect();
    let r: Vec<f64> = (0..k as usize).map(|i| s[i + 1] - s[i] - q[i]).collect();
    let s0_cubed = s0.powi(3);
    let growth_ok = (0..k as usize).all(|i| s[i] * s[i] * q[i] >= s0_cubed * (1.0 - REL_EPS));
    let q_sum_ok = q.iter().sum::<f64>() <= 4.0 / 3.0 * s0 * (1.0 + REL_EPS);
    let negative_r = r.iter().enumerate().filter(|(_, &x)| x < 0.0).map(|(i, _)| i + 1).collect();
    let q_ceil = q.iter().map(|x| x.ceil() as u64).collect();
    Ok(DoublingSchedule { t, s0, k: k as u32, s, q, r, q_ceil, growth_ok, q_sum_ok, negative_r })
}

/// Base `4e n^d p / (t γ^{1-2/ω})` of the first-moment bound with
/// `γ = n^{2d} p³` and `t = C n^{d/3} (ln γ)^{1/3}`, so that `ω = C / 2^{(d+1)/3}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseBase {
    pub gamma: f64,
    pub omega: f64,
    pub t: f64,
    pub base: f64,
    /// `γ < s*/2^{d+1}`.
    pub gamma_ok: bool,
}

pub fn sparse_regime_base(n: u64, d: u32, p: f64, c: f64) -> Result<SparseBase> {
    let (nf, df) = (n as f64, d as f64);
    let gamma = nf.powf(2.0 * df) * p.powi(3);
    if gamma <= 1.0 {
        return Err(Error::Hypothesis(format!("need n^(2d) p^3 > 1, got {gamma}")));
    }
    let omega = c / 2f64.powf((df + 1.0) / 3.0);
    let inputs = BoundInputsSmall { n, d, gamma, omega };
    let t = inputs.t();
    let base = 4.0 * E * nf.powf(df) * p / (t * gamma.powf(1.0 - 2.0 / omega));
    let gamma_ok = gamma < inputs.s_star() / 2f64.powi(d as i32 + 1);
    Ok(SparseBase { gamma, omega, t, base, gamma_ok })
}

/// JSON report `{inputs, log2_bound, hypothesis_ok}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inputs: serde_json::Value,
    pub log2_bound: f64,
    pub hypothesis_ok: bool,
}

impl BoundReport {
    pub fn large(inp: &BoundInputsLarge) -> Self {
        let mut inputs = serde_json::to_value(inp).expect("plain struct");
        inputs["s0"] = inp.s0().into();
        BoundReport { inputs, log2_bound: inp.log2_formula(), hypothesis_ok: inp.hypothesis_ok() }
    }

    pub fn small(inp: &BoundInputsSmall) -> Self {
        let mut inputs = serde_json::to_value(inp).expect("plain struct");
        inputs["s_star"] = inp.s_star().into();
        inputs["t"] = inp.t().into();
        BoundReport { inputs, log2_bound: inp.log2_formula(), hypothesis_ok: inp.hypothesis_ok() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn large_reference_value() {
        // 50-digit reference: s0 = 380.898249528110938…, log2 bound = 41252.98839539829643…
        let inp = BoundInputsLarge { n: 1_000_000, d: 1, t: 2000.0 };
        assert!(close(inp.s0(), 380.89824952811094, 1e-13));
        assert!(close(bound_large(&inp).unwrap(), 41_252.988_395_398_29, 1e-11));
    }

    #[test]
    fn large_second_term_vanishes() {
        let (n, d) = (1_000_000u64, 1u32);
        let t = (E * 2f64.powi(d as i32 + 5) * (n as f64)).sqrt();
        let inp = BoundInputsLarge { n, d, t };
        let first = 2.0 * 2.0 * inp.s0() * (n as f64).log2();
        assert!(close(bound_large(&inp).unwrap(), first, 1e-12));
    }

    #[test]
    fn large_hypothesis() {
        let inp = BoundInputsLarge { n: 40, d: 1, t: 8.0 };
        assert!(matches!(bound_large(&inp), Err(Error::Hypothesis(_))));
        let ok = BoundInputsLarge { n: 40, d: 1, t: 2.0 * inp.s0() };
        assert!(bound_large(&ok).unwrap().is_finite());
    }

    #[test]
    fn small_reference_value() {
        // 50-digit reference for n=10^6, d=1, γ=10, ω=4: s* = 209.616384862189…
        let inp = BoundInputsSmall { n: 1_000_000, d: 1, gamma: 10.0, omega: 4.0 };
        assert!(close(inp.s_star(), 209.61638486218906, 1e-13));
        assert!(close(bound_small(&inp).unwrap(), 10063.005058218396, 1e-11));
    }

    #[test]
    fn small_hypothesis_edges() {
        let base = BoundInputsSmall { n: 1_000_000, d: 1, gamma: 10.0, omega: 3.9 };
        assert!(bound_small(&base).is_err());
        assert!(bound_small(&BoundInputsSmall { gamma: 1.0, omega: 4.0, ..base }).is_err());
        // γ just below its ceiling: s*/4 with s* depending on γ only through (ln γ)^{1/3}.
        let mut g = 10.0;
        for _ in 0..200 {
            g = BoundInputsSmall { gamma: g, omega: 4.0, ..base }.s_star() / 4.0 * (1.0 - 1e-9);
        }
        let edge = BoundInputsSmall { gamma: g, omega: 4.0, ..base };
        assert!(edge.hypothesis_ok());
        assert!(bound_small(&edge).unwrap().is_finite());
    }

    #[test]
    fn c_omega_values() {
        assert!(close(c_omega(4.0).unwrap(), 7.688462056318234, 1e-14));
        for w in [4.0, 4.5, 10.0, 1e3, 1e6] {
            assert!(c_omega(w).unwrap() <= 4.0 * E);
        }
        assert!(close(c_omega(1e6).unwrap(), E, 1e-4));
        assert!(c_omega(2.0).is_err());
    }

    #[test]
    fn schedule_examples() {
        let sch = schedule(8.0, 2.0).unwrap();
        assert_eq!(sch.k, 2);
        assert_eq!(sch.s, vec![2.0, 4.0, 8.0]);
        assert_eq!(sch.q, vec![2.0, 0.5]);
        assert_eq!(sch.r, vec![0.0, 3.5]);
        assert_eq!(sch.q_ceil, vec![2, 1]);
        assert!(sch.growth_ok && sch.q_sum_ok && sch.negative_r.is_empty());
        assert_eq!(schedule(6.0, 3.0).unwrap().k, 1);
        assert!(schedule(5.0, 3.0).is_err());
        let sch = schedule(1000.0, 3.0).unwrap();
        assert_eq!(sch.k, 8);
        assert!(sch.q.iter().sum::<f64>() <= 4.0);
        assert_eq!(*sch.s.last().unwrap(), 1000.0);
    }

    #[test]
    fn schedule_reports_negative_r() {
        // t barely above 2 s0: s_2 − s_1 = t/2 is smaller than q_1 = s0 only
        // when t/2 < s0, which the hypothesis excludes; with t = 2 s0 exactly r_1 = 0.
        let sch = schedule(2.0, 1.0).unwrap();
        assert_eq!(sch.r, vec![0.0]);
        let sch = schedule(7.9, 2.0).unwrap();
        assert_eq!(sch.k, 1);
        assert!(sch.negative_r.is_empty());
    }

    #[test]
    fn small_t_regime_examples() {
        let v = bound_small_t_regime(10, 1).unwrap();
        assert!(close(v, 385f64.log2(), 1e-12));
        // 50-digit reference for n = 1000, d = 1 (T = 69).
        assert!(close(bound_small_t_regime(1000, 1).unwrap(), 357.961_355_552_285_6, 1e-11));
        let mut prev = f64::NEG_INFINITY;
        for n in 3..300 {
            let v = bound_small_t_regime(n, 1).unwrap();
            assert!(v >= prev);
            prev = v;
            // Largest-term bound, valid while T ≤ n/2.
            let t = ((n as f64).cbrt() * (n as f64).ln()).floor();
            assert!(t <= n as f64 / 2.0);
            assert!(v <= ln_binomial(n as f64, t) / LN_2 + t.log2() + 1e-9);
        }
    }

    #[test]
    fn sparse_base_is_below_half() {
        for d in 1..=3u32 {
            let c = 200.0 * 2f64.powf((d as f64 + 1.0) / 3.0);
            for n in [100u64, 1000, 10_000, 1_000_000] {
                let lo = 2.0 * (n as f64).powf(-2.0 * d as f64 / 3.0);
                let hi = (n as f64).powf(-2.0 * d as f64 / 3.0 + d as f64 / 9.0);
                if hi < lo {
                    continue;
                }
                for k in 0..=10 {
                    let p = lo * (hi / lo).powf(k as f64 / 10.0);
                    let b = sparse_regime_base(n, d, p, c).unwrap();
                    assert!(b.gamma >= 8.0 * (1.0 - 1e-9));
                    assert!(b.base <= 0.5, "n={n} d={d} p={p}: {}", b.base);
                }
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let r = BoundReport::large(&BoundInputsLarge { n: 40, d: 1, t: 8.0 });
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["hypothesis_ok"], false);
        assert!(v["inputs"]["s0"].as_f64().unwrap() > 8.0);
        assert!(v["log2_bound"].is_number());
    }
}
