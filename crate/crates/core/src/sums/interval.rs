use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::bump::SmoothBump;
use crate::error::{Error, Result};
use crate::phase::ZERO;
use crate::tracefn::TraceFunction;
use crate::transforms::{fourier_values, Direction};

/// `Σ_{a ≤ n ≤ b} K(n)`.
pub fn interval_sum(k: &TraceFunction, a: u64, b: u64) -> Result<Complex64> {
    if a > b || b >= k.q() {
        return Err(Error::InvalidArgument(format!(
            "interval [{a}, {b}] not inside [0, {})",
            k.q()
        )));
    }
    Ok(k.values()[a as usize..=b as usize].iter().sum())
}

/// The largest interval sum and where it is attained.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalInterval {
    pub max: f64,
    pub start: u64,
    pub end: u64,
    pub method: &'static str,
}

fn prefix_points(k: &TraceFunction) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(k.values().len() + 1);
    let mut acc = ZERO;
    pts.push(acc);
    for v in k.values() {
        acc += v;
        pts.push(acc);
    }
    pts
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Exact maximum of `|S(K; I)|` over all intervals `I ⊂ [0, q)`.
///
/// Interval sums are differences of prefix sums, so the maximum is the diameter
/// of the prefix point set, found on its convex hull.
pub fn pv_extremal_scan(k: &TraceFunction) -> ExtremalInterval {
    let pts = prefix_points(k);
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        pts[i]
            .re
            .total_cmp(&pts[j].re)
            .then(pts[i].im.total_cmp(&pts[j].im))
    });
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let order: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in order {
            while hull.len() >= start + 2
                && cross(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    if hull.is_empty() {
        hull.push(0);
    }
    let mut best = (0.0, 0, 0);
    for (n, &i) in hull.iter().enumerate() {
        for &j in &hull[n + 1..] {
            let d = (pts[i] - pts[j]).norm();
            if d > best.0 {
                best = (d, i.min(j), i.max(j));
            }
        }
    }
    let (max, i, j) = best;
    ExtremalInterval {
        max,
        start: i as u64,
        end: j.saturating_sub(1) as u64,
        method: "hull-diameter",
    }
}

/// `O(q²)` enumeration of all intervals.
pub fn pv_bruteforce(k: &TraceFunction) -> ExtremalInterval {
    let pts = prefix_points(k);
    let mut best = (0.0, 0, 0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[j] - pts[i]).norm();
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    ExtremalInterval {
        max: best.0,
        start: best.1 as u64,
        end: best.2.saturating_sub(1) as u64,
        method: "exhaustive",
    }
}

/// `max |S(K;I)| / (√q log q)`.
pub fn pv_ratio(k: &TraceFunction) -> f64 {
    let q = k.q() as f64;
    pv_extremal_scan(k).max / (q.sqrt() * q.ln())
}

/// One sampled interval in the range `√q < |I| ≤ q`.
#[derive(Debug, Clone, Serialize)]
pub struct SampledInterval {
    pub start: u64,
    pub len: u64,
    #[serde(with = "crate::report::complex")]
    pub sum: Complex64,
    pub ratio: f64,
}

/// Seeded sample of intervals with `√q < |I| ≤ q`, each with
/// `|S(K;I)| / (√q (1 + log(|I|/√q)))`.
pub fn fkmrrs_sample(k: &TraceFunction, count: usize, seed: u64) -> Vec<SampledInterval> {
    let q = k.q();
    let sq = (q as f64).sqrt();
    let min_len = sq.floor() as u64 + 1;
    let pts = prefix_points(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(min_len..=q);
            let start = rng.gen_range(0..=q - len);
            let sum = pts[(start + len) as usize] - pts[start as usize];
            let ratio = sum.norm() / (sq * (1.0 + (len as f64 / sq).ln()));
            SampledInterval {
                start,
                len,
                sum,
                ratio,
            }
        })
        .collect()
}

/// Integers in the open interval `(N, 2N)`.
fn bump_range(n: f64) -> std::ops::Range<i64> {
    let lo = n.floor() as i64 + 1;
    let hi = (2.0 * n).ceil() as i64;
    lo..hi.max(lo)
}

/// `Σ_n K(n) V(n/N)`.
pub fn smoothed_sum(k: &TraceFunction, v: &SmoothBump, n: f64) -> Complex64 {
    if n <= 0.0 {
        return ZERO;
    }
    bump_range(n)
        .map(|m| k.at(m) * v.value(m as f64 / n))
        .sum()
}

/// Dual side of the Poisson formula:
/// `(N/√q) Σ_{|h| ≤ H} K̂(h) V̂(hN/q)` with `K̂(h) = q^{-1/2} Σ_x K(x) e_q(−xh)`
/// and `H = ⌊truncation·q/N⌋`.
pub fn poisson_dual(k: &TraceFunction, v: &SmoothBump, n: f64, truncation: f64) -> Result<Complex64> {
    let khat = fourier_values(k.values(), Direction::Minus)?;
    let table = DualWeights::new(v, k.q(), n, truncation);
    Ok(table.apply(|h| khat[h.rem_euclid(k.q() as i64) as usize]))
}

/// The weights `(N/√q) V̂(hN/q)` for `|h| ≤ H`, reusable across functions with the same `q` and `N`.
#[derive(Debug, Clone)]
pub(crate) struct DualWeights {
    h_max: i64,
    weights: Vec<Complex64>,
}

impl DualWeights {
    pub(crate) fn new(v: &SmoothBump, q: u64, n: f64, truncation: f64) -> Self {
        let qf = q as f64;
        let h_max = (truncation * qf / n).floor() as i64;
        let scale = n / qf.sqrt();
        let weights = (-h_max..=h_max)
            .map(|h| v.fourier(h as f64 * n / qf) * scale)
            .collect();
        Self { h_max, weights }
    }

    /// `Σ_h khat(h) w(h)`.
    pub(crate) fn apply(&self, khat: impl Fn(i64) -> Complex64) -> Complex64 {
        (-self.h_max..=self.h_max)
            .zip(&self.weights)
            .map(|(h, w)| khat(h) * w)
            .sum()
    }
}

/// Truncation used by the Poisson checks: `|h| ≤ 50 q/N`.
pub const POISSON_TRUNCATION: f64 = 50.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_prime_modulus, PrimeModulus};
    use crate::tracefn::{all_ones, legendre_character};
    use crate::transforms::kloosterman;
    use std::sync::Arc;

    fn field(q: u64) -> Arc<PrimeModulus> {
        Arc::new(make_prime_modulus(q).unwrap())
    }

    #[test]
    fn interval_basics() {
        let q = field(101);
        let chi = legendre_character(&q);
        assert!(interval_sum(&chi, 0, 100).unwrap().norm() < 1e-9);
        assert_eq!(interval_sum(&chi, 7, 7).unwrap(), chi.get(7));
        assert!(interval_sum(&chi, 5, 4).is_err());
        let q = field(1009);
        let kl = kloosterman(&q).unwrap();
        assert!(interval_sum(&kl, 0, 31).unwrap().norm() <= 2.0 * 32.0);
    }

    #[test]
    fn extremal_scan_matches_bruteforce() {
        for p in [3u64, 5, 31, 101, 499] {
            let q = field(p);
            for k in [kloosterman(&q).unwrap(), legendre_character(&q), all_ones(&q)] {
                let fast = pv_extremal_scan(&k);
                let slow = pv_bruteforce(&k);
                assert!((fast.max - slow.max).abs() < 1e-9, "q={p}");
                let s = interval_sum(&k, fast.start, fast.end).unwrap();
                assert!((s.norm() - fast.max).abs() < 1e-9);
            }
        }
        let ones = pv_extremal_scan(&all_ones(&field(13)));
        assert_eq!((ones.start, ones.end), (0, 12));
        assert!((ones.max - 13.0).abs() < 1e-12);
    }

    #[test]
    fn smoothed_sums() {
        let q = field(101);
        let v = SmoothBump::new();
        assert_eq!(smoothed_sum(&all_ones(&q), &v, 0.4), ZERO);
        let n = 2.0e4;
        let s = smoothed_sum(&all_ones(&q), &v, n);
        assert!((s.re / (n * v.integral()) - 1.0).abs() < 5e-3);
    }

    #[test]
    fn poisson_kl2() {
        let q = field(101);
        let kl = kloosterman(&q).unwrap();
        let v = SmoothBump::new();
        let lhs = smoothed_sum(&kl, &v, 50.0);
        let rhs = poisson_dual(&kl, &v, 50.0, POISSON_TRUNCATION).unwrap();
        assert!((lhs - rhs).norm() < 1e-8);
    }
}
