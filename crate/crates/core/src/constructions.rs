//! Explicit dense Sidon sets.
//!
//! Perfect difference sets modulo `q² + q + 1` come from the cyclic structure
//! of the projective plane over `GF(q)`: with `θ` generating
//! `GF(q³)* / GF(q)*`, the exponents `i ∈ [0, q²+q+1)` for which `θ^i` lies
//! in the plane spanned by `1` and `θ` form a difference set of size `q + 1`.
//! Residues of a modular Sidon set taken in `[0, m)` are Sidon over the
//! integers, and the base-`n` digit map carries integer Sidon sets in
//! `[0, n^d)` to Sidon sets of `[n]^d`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridParams, GridPoint, PointSet};
use crate::sidon::is_sidon;

/// Largest prime order for which a difference set is built on demand.
/// Building costs `O(q²)` field steps.
pub const MAX_SINGER_ORDER: u64 = 3001;

/// Number of unit multipliers tried when cutting a difference set down to a
/// shorter interval.
const WINDOW_MULTIPLIERS: usize = 4;

/// `φ_d`: the base-`n` digits `(a_0, …, a_{d-1})` of `a`.
pub fn phi_d(a: u64, grid: &GridParams) -> Result<GridPoint> {
    grid.unrank(a)
}

/// Image of `A ⊆ [0, n^d)` under [`phi_d`]. Digit expansion is the inverse
/// of the rank map, so the image has the same ranks as `A`.
pub fn lift_sidon(values: &[u64], grid: &GridParams) -> Result<PointSet> {
    let lifted = PointSet::from_ranks(*grid, values.iter().copied())?;
    #[cfg(debug_assertions)]
    if lifted.len() <= 4096 {
        let flat = PointSet::from_ranks(GridParams::interval(grid.size())?, values.iter().copied())?;
        debug_assert!(!is_sidon(&flat).verdict || is_sidon(&lifted).verdict);
    }
    Ok(lifted)
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q < 4 {
        return true;
    }
    if q.is_multiple_of(2) {
        return false;
    }
    let mut f = 3;
    while f * f <= q {
        if q.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// A set of residues modulo `q² + q + 1` in which every nonzero residue is a
/// difference of two elements in exactly one way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceSetCertificate {
    pub modulus: u64,
    pub elements: Vec<u64>,
    pub checked: bool,
}

impl DifferenceSetCertificate {
    /// Recomputes the perfect-difference property from scratch.
    pub fn verify(&self) -> bool {
        let m = self.modulus;
        if m == 0 || self.elements.iter().any(|&x| x >= m) {
            return false;
        }
        let k = self.elements.len() as u64;
        if k * (k.saturating_sub(1)) != m - 1 {
            return false;
        }
        let mut hit = vec![false; m as usize];
        for &a in &self.elements {
            for &b in &self.elements {
                if a != b {
                    let diff = ((a + m - b) % m) as usize;
                    if hit[diff] {
                        return false;
                    }
                    hit[diff] = true;
                }
            }
        }
        hit[1..].iter().all(|&h| h)
    }

    /// Multiply every element by a unit `u` and sort.
    pub fn scaled(&self, u: u64) -> Vec<u64> {
        let m = self.modulus;
        let mut out: Vec<u64> = self.elements.iter().map(|&x| ((x as u128 * u as u128) % m as u128) as u64).collect();
        out.sort_unstable();
        out
    }
}

/// Perfect difference set of size `q + 1` modulo `q² + q + 1` for prime `q`
/// (and the degenerate `q = 1`, which gives `{0, 1}` mod 3).
pub fn singer_sidon(q: u64) -> Result<DifferenceSetCertificate> {
    singer_cached(q).map(|c| (*c).clone())
}

fn singer_cache() -> &'static Mutex<HashMap<u64, Arc<DifferenceSetCertificate>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<DifferenceSetCertificate>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub(crate) fn singer_cached(q: u64) -> Result<Arc<DifferenceSetCertificate>> {
    if let Some(c) = singer_cache().lock().expect("singer cache").get(&q) {
        return Ok(c.clone());
    }
    let cert = Arc::new(build_singer(q)?);
    singer_cache().lock().expect("singer cache").insert(q, cert.clone());
    Ok(cert)
}

fn build_singer(q: u64) -> Result<DifferenceSetCertificate> {
    if q == 1 {
        return Ok(DifferenceSetCertificate { modulus: 3, elements: vec![0, 1], checked: true });
    }
    if !is_prime(q) {
        return Err(Error::Unsupported(format!("{q} is not prime; only prime orders are constructed")));
    }
    if q > MAX_SINGER_ORDER {
        return Err(Error::Unsupported(format!("order {q} exceeds the supported maximum {MAX_SINGER_ORDER}")));
    }
    let modulus = q * q + q + 1;
    let mut elements = projective_line_exponents(q);
    if elements.is_none() && q <= 7 {
        elements = exhaustive_difference_set(modulus, (q + 1) as usize);
    }
    let elements = elements.ok_or_else(|| Error::Internal(format!("no difference set found for q={q}")))?;
    let mut cert = DifferenceSetCertificate { modulus, elements, checked: false };
    cert.checked = cert.verify();
    if !cert.checked {
        return Err(Error::Internal(format!("difference set for q={q} failed verification")));
    }
    Ok(cert)
}

/// Walks the powers of `θ` in `GF(q)[x]/(f)` for cubic `f` until one whose
/// class has order `q² + q + 1` modulo scalars is found, collecting the
/// exponents with vanishing `θ²` coefficient.
///
/// The constant term varies fastest: it fixes the norm of `θ`, and for
/// `q ≡ 1 (mod 3)` a norm of `-1` forces the class order to divide `m / 3`.
fn projective_line_exponents(q: u64) -> Option<Vec<u64>> {
    let m = q * q + q + 1;
    for f1 in 0..q {
        for f2 in 0..q {
            'poly: for f0 in 1..q {
                let has_root = (0..q).any(|x| ((x * x % q) * x + f2 * (x * x % q) + f1 * x + f0).is_multiple_of(q));
                if has_root {
                    continue;
                }
                // θ·(c0 + c1θ + c2θ²) with θ³ = -(f2θ² + f1θ + f0).
                let (nf0, nf1, nf2) = ((q - f0) % q, (q - f1) % q, (q - f2) % q);
                let mut e = [1u64, 0, 0];
                let mut line = vec![0u64];
                for i in 1..m {
                    let c2 = e[2];
                    e = [(c2 * nf0) % q, (e[0] + c2 * nf1) % q, (e[1] + c2 * nf2) % q];
                    if e[2] == 0 {
                        if e[1] == 0 {
                            continue 'poly;
                        }
                        line.push(i);
                    }
                }
                if line.len() as u64 == q + 1 {
                    return Some(line);
                }
            }
        }
    }
    None
}

/// Backtracking search for a `k`-subset of `Z_m` containing `0` and `1` with
/// pairwise distinct differences.
fn exhaustive_difference_set(m: u64, k: usize) -> Option<Vec<u64>> {
    fn extend(m: u64, k: usize, set: &mut Vec<u64>, used: &mut [bool]) -> bool {
        if set.len() == k {
            return true;
        }
        let start = set.last().map_or(0, |&x| x + 1);
        for x in start..m {
            let diffs: Vec<usize> =
                set.iter().flat_map(|&y| [((x + m - y) % m) as usize, ((y + m - x) % m) as usize]).collect();
            let mut ok = true;
            for (i, &dv) in diffs.iter().enumerate() {
                if used[dv] || diffs[..i].contains(&dv) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            for &dv in &diffs {
                used[dv] = true;
            }
            set.push(x);
            if extend(m, k, set, used) {
                return true;
            }
            set.pop();
            for &dv in &diffs {
                used[dv] = false;
            }
        }
        false
    }
    let mut used = vec![false; m as usize];
    used[0] = true;
    used[1] = true;
    used[(m - 1) as usize] = true;
    let mut set = vec![0, 1];
    if k < 2 {
        set.truncate(k);
        return Some(set);
    }
    extend(m, k, &mut set, &mut used).then_some(set)
}

/// `1, 2, 3, 5, 7, 11, …`: orders with a difference set available.
fn next_order(q: u64) -> u64 {
    let mut c = q + 1;
    while !(c == 1 || is_prime(c)) {
        c += 1;
    }
    c
}

fn plane_size(q: u64) -> u64 {
    q * q + q + 1
}

/// For each window length class: the shortest circular arc of the sorted
/// residues containing `k` elements, for `k = 1..=len`.
#[derive(Debug)]
struct WindowProfile {
    modulus: u64,
    residues: Vec<u64>,
    /// `spans[k-1] = (arc length, start index)` of the best arc with `k` elements.
    spans: Vec<(u64, usize)>,
}

impl WindowProfile {
    fn new(cert: &DifferenceSetCertificate, u: u64) -> Self {
        let m = cert.modulus;
        let residues = cert.scaled(u);
        let len = residues.len();
        let mut spans = vec![(u64::MAX, 0usize); len];
        for start in 0..len {
            for k in 1..=len {
                let end = (start + k - 1) % len;
                let span = (residues[end] + m - residues[start]) % m + 1;
                if span < spans[k - 1].0 {
                    spans[k - 1] = (span, start);
                }
            }
        }
        WindowProfile { modulus: m, residues, spans }
    }

    /// Largest `k` fitting in `[0, n)`.
    fn best_for(&self, n: u64) -> usize {
        self.spans.iter().rposition(|&(span, _)| span <= n).map_or(0, |i| i + 1)
    }

    fn window(&self, k: usize) -> Vec<u64> {
        let (_, start) = self.spans[k - 1];
        let base = self.residues[start];
        let len = self.residues.len();
        let mut out: Vec<u64> =
            (0..k).map(|j| (self.residues[(start + j) % len] + self.modulus - base) % self.modulus).collect();
        out.sort_unstable();
        out
    }
}

/// Profiles keyed by `(order, multiplier)`.
type WindowCache = Mutex<HashMap<(u64, u64), Arc<WindowProfile>>>;

fn window_cache() -> &'static WindowCache {
    static CACHE: OnceLock<WindowCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn window_profile(q: u64, u: u64) -> Result<Arc<WindowProfile>> {
    if let Some(p) = window_cache().lock().expect("window cache").get(&(q, u)) {
        return Ok(p.clone());
    }
    let cert = singer_cached(q)?;
    let profile = Arc::new(WindowProfile::new(&cert, u));
    window_cache().lock().expect("window cache").insert((q, u), profile.clone());
    Ok(profile)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The full difference set of the largest order whose modulus is at most
/// `n` (or `{0}`), together with the next order.
fn full_difference_set_below(n: u64) -> (Vec<u64>, u64) {
    let mut q = 1;
    let mut below: Option<u64> = None;
    while plane_size(q) <= n && q <= MAX_SINGER_ORDER {
        below = Some(q);
        q = next_order(q);
    }
    let set = match below {
        Some(qa) => singer_cached(qa).expect("order is prime or 1").elements.clone(),
        None => vec![0],
    };
    (set, q)
}

/// A Sidon subset of `[0, n)` built from difference sets.
///
/// Two candidates are compared: the full difference set of the largest order
/// whose modulus fits in `[0, n)`, and the best arc of length `n` cut from the
/// next larger difference set (under a few unit multipliers), translated to
/// start at zero. The larger one wins, the full set on ties.
pub fn dense_sidon_in_interval(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let (mut best, q) = full_difference_set_below(n);
    if q > MAX_SINGER_ORDER {
        return best;
    }
    let m = plane_size(q);
    let mut chosen: Option<(Arc<WindowProfile>, usize)> = None;
    for u in (1..m).filter(|&u| gcd(u, m) == 1).take(WINDOW_MULTIPLIERS) {
        let profile = window_profile(q, u).expect("order is prime or 1");
        let k = profile.best_for(n);
        if k > chosen.as_ref().map_or(best.len(), |c| c.1) {
            chosen = Some((profile, k));
        }
    }
    if let Some((profile, k)) = chosen {
        best = profile.window(k);
    }
    best
}

/// `φ_d` applied to [`dense_sidon_in_interval`]`(n^d)`.
pub fn dense_sidon_in_grid(grid: &GridParams) -> PointSet {
    let values = dense_sidon_in_interval(grid.size());
    PointSet::from_ranks(*grid, values).expect("construction stays inside [0, n^d)")
}
