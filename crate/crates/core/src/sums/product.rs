use num_complex::Complex64;
use serde::Serialize;

use super::bump::SmoothBump;
use super::interval::{DualWeights, POISSON_TRUNCATION};
use crate::error::{Error, Result};
use crate::phase::ZERO;
use crate::tracefn::{multiplicative_shift, TraceFunction};
use crate::transforms::{fourier_values, Direction};

/// Cost ceiling on `Π N_i` for [`smoothed_product_sum`].
pub const PRODUCT_SUM_BUDGET: f64 = 1e8;

fn support(n: f64) -> Vec<(u64, f64)> {
    if n <= 0.0 {
        return Vec::new();
    }
    let lo = n.floor() as u64 + 1;
    let hi = (2.0 * n).ceil() as u64;
    (lo..hi)
        .map(|m| (m, SmoothBump::eval(m as f64 / n)))
        .filter(|&(_, w)| w > 0.0)
        .collect()
}

/// `Σ K(a n_1 ⋯ n_d) Π V(n_i/N_i)` for `d ∈ {2, 3}`.
pub fn smoothed_product_sum(k: &TraceFunction, a: u64, ns: &[f64]) -> Result<Complex64> {
    if !(2..=3).contains(&ns.len()) {
        return Err(Error::InvalidArgument(format!(
            "product sums take 2 or 3 variables, got {}",
            ns.len()
        )));
    }
    let cost: f64 = ns.iter().map(|n| n.max(0.0)).product();
    if cost > PRODUCT_SUM_BUDGET {
        return Err(Error::Capacity(format!(
            "Π N_i = {cost:e} exceeds {PRODUCT_SUM_BUDGET:e}"
        )));
    }
    let q = k.q();
    let supports: Vec<Vec<(u64, f64)>> = ns.iter().map(|&n| support(n)).collect();
    if supports.iter().any(|s| s.is_empty()) {
        return Ok(ZERO);
    }
    let mut total = ZERO;
    for &(n1, w1) in &supports[0] {
        let x1 = a % q * (n1 % q) % q;
        for &(n2, w2) in &supports[1] {
            let x2 = x1 * (n2 % q) % q;
            if ns.len() == 2 {
                total += k.get(x2) * (w1 * w2);
            } else {
                let inner: Complex64 = supports[2]
                    .iter()
                    .map(|&(n3, w3)| k.get(x2 * (n3 % q) % q) * w3)
                    .sum();
                total += inner * (w1 * w2);
            }
        }
    }
    Ok(total)
}

/// Two-variable product sum with the inner variable dualized by Poisson summation,
/// using `K(sx)^(h) = K̂(h s̄)`.
pub fn smoothed_product_sum_poisson(k: &TraceFunction, a: u64, n1: f64, n2: f64) -> Result<Complex64> {
    let q = k.prime()?;
    let p = q.q();
    let v = SmoothBump::new();
    let khat = fourier_values(k.values(), Direction::Minus)?;
    let weights = DualWeights::new(&v, p, n2, POISSON_TRUNCATION);
    let mut total = ZERO;
    for (m, w) in support(n1) {
        let shift = a % p * (m % p) % p;
        let inner = match q.inv(shift) {
            None => support(n2).iter().map(|&(_, w2)| w2).sum::<f64>() * k.get(0),
            Some(s_inv) => weights.apply(|h| khat[q.mul(q.reduce(h), s_inv) as usize]),
        };
        total += inner * w;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VdcReport {
    pub p: u64,
    pub q: u64,
    pub n: f64,
    #[serde(with = "crate::report::complex")]
    pub value: Complex64,
    /// `|S| / (N^{1/2} (p + q^{1/2})^{1/2})`.
    pub bound_ratio: f64,
    /// `|S| / (N^{1/2} (pq)^{1/6})`.
    pub optimal_ratio: f64,
}

/// `S = Σ_n K_p(n) K_q(n) V(n/N)` for trace functions modulo distinct primes.
pub fn vdc_sum(kp: &TraceFunction, kq: &TraceFunction, n: f64, v: &SmoothBump) -> Result<VdcReport> {
    let (p, q) = (kp.q(), kq.q());
    if 2.0 * n >= (p * q) as f64 {
        return Err(Error::InvalidArgument(format!(
            "van der Corput sums need 2N < pq, got N={n}, pq={}",
            p * q
        )));
    }
    let lo = n.floor() as u64 + 1;
    let hi = (2.0 * n).ceil() as u64;
    let value: Complex64 = (lo..hi)
        .map(|m| kp.get(m) * kq.get(m) * v.value(m as f64 / n))
        .sum();
    let (pf, qf) = (p as f64, q as f64);
    Ok(VdcReport {
        p,
        q,
        n,
        value,
        bound_ratio: value.norm() / (n.sqrt() * (pf + qf.sqrt()).sqrt()),
        optimal_ratio: value.norm() / (n.sqrt() * (pf * qf).powf(1.0 / 6.0)),
    })
}

/// `n ↦ Kl₂(n q̄²; p)` and `n ↦ Kl₂(n p̄²; q)`, whose product is `Kl₂(n; pq)`.
pub fn kl2_components(
    p: &std::sync::Arc<crate::arith::PrimeModulus>,
    q: &std::sync::Arc<crate::arith::PrimeModulus>,
) -> Result<(TraceFunction, TraceFunction)> {
    let klp = crate::transforms::kloosterman(p)?;
    let klq = crate::transforms::kloosterman(q)?;
    let twist = |kl: &TraceFunction, m: &crate::arith::PrimeModulus, other: u64| {
        let inv = m.inv(other % m.q()).ok_or_else(|| {
            Error::InvalidArgument(format!("moduli {} and {other} must be distinct primes", m.q()))
        })?;
        multiplicative_shift(kl, m.mul(inv, inv))
    };
    Ok((twist(&klp, p, q.q())?, twist(&klq, q, p.q())?))
}
