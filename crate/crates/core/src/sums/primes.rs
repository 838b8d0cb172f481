use num_complex::Complex64;
use serde::Serialize;

use super::bump::SmoothBump;
use crate::arith::modular::{gcd, integer_root};
use crate::arith::ArithmeticTables;
use crate::error::{Error, Result};
use crate::tracefn::TraceFunction;

/// Largest `n` accepted by [`heath_brown_check`].
pub const HEATH_BROWN_MAX_N: u64 = 1_000_000;

fn need_table(tables: &ArithmeticTables, x: u64) -> Result<()> {
    if x > tables.limit() {
        return Err(Error::Capacity(format!(
            "range {x} exceeds sieve limit {}",
            tables.limit()
        )));
    }
    Ok(())
}

/// `Σ_{p ≤ X} K(p)`, or `Σ_p K(p) V(p/X)` when a bump is given.
pub fn prime_sum(
    k: &TraceFunction,
    x: u64,
    tables: &ArithmeticTables,
    v: Option<&SmoothBump>,
) -> Result<Complex64> {
    match v {
        None => {
            need_table(tables, x)?;
            Ok(tables.primes_up_to(x).iter().map(|&p| k.get(p)).sum())
        }
        Some(v) => {
            need_table(tables, 2 * x)?;
            Ok(tables
                .primes_up_to(2 * x)
                .iter()
                .map(|&p| k.get(p) * v.value(p as f64 / x as f64))
                .sum())
        }
    }
}

/// `|Σ_{p≤X} K(p)| / π(X)`.
pub fn prime_sum_ratio(k: &TraceFunction, x: u64, tables: &ArithmeticTables) -> Result<f64> {
    let s = prime_sum(k, x, tables, None)?;
    Ok(s.norm() / tables.primes_up_to(x).len() as f64)
}

/// Dirichlet convolution of two arrays on `1..=n` (index 0 ignored).
fn dirichlet(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len() - 1;
    let mut out = vec![0.0; n + 1];
    for d in 1..=n {
        if a[d] == 0.0 {
            continue;
        }
        for m in 1..=n / d {
            out[d * m] += a[d] * b[m];
        }
    }
    out
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Right-hand side of the Heath-Brown identity for every `n ≤ limit`:
/// `−Σ_{j≤J} (−1)^j C(J,j) (μ_{≤Z}^{*j} * 1^{*(j−1)} * log)(n)` with `Z = ⌊X^{1/J}⌋`.
pub fn heath_brown_table(j_max: u32, x: u64, limit: u64, tables: &ArithmeticTables) -> Result<Vec<f64>> {
    if j_max == 0 {
        return Err(Error::InvalidArgument("J must be at least 1".into()));
    }
    if limit > HEATH_BROWN_MAX_N {
        return Err(Error::Capacity(format!(
            "Heath-Brown expansion beyond n = {HEATH_BROWN_MAX_N}"
        )));
    }
    need_table(tables, limit.max(1))?;
    let n = limit as usize;
    let z = integer_root(x, j_max);
    let mut mu_z = vec![0.0; n + 1];
    for m in 1..=n.min(z as usize) {
        mu_z[m] = tables.mu(m as u64) as f64;
    }
    let one: Vec<f64> = (0..=n).map(|i| if i == 0 { 0.0 } else { 1.0 }).collect();
    let log: Vec<f64> = (0..=n).map(|i| if i == 0 { 0.0 } else { (i as f64).ln() }).collect();
    let mut rhs = vec![0.0; n + 1];
    // term_j = μ_Z^{*j} * 1^{*(j-1)} * log, built incrementally
    let mut term = dirichlet(&mu_z, &log);
    for j in 1..=j_max {
        if j > 1 {
            term = dirichlet(&dirichlet(&term, &mu_z), &one);
        }
        let c = -(if j % 2 == 0 { 1.0 } else { -1.0 }) * binomial(j_max, j);
        for i in 1..=n {
            rhs[i] += c * term[i];
        }
    }
    Ok(rhs)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HeathBrownCheck {
    pub n: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub delta: f64,
}

/// `Λ(n)` against the Heath-Brown expansion at `(J, X)`.
pub fn heath_brown_check(n: u64, j: u32, x: u64, tables: &ArithmeticTables) -> Result<HeathBrownCheck> {
    if n == 0 || n >= 2 * x {
        return Err(Error::InvalidArgument(format!(
            "Heath-Brown identity needs 1 ≤ n < 2X, got n={n}, X={x}"
        )));
    }
    let rhs = heath_brown_table(j, x, n, tables)?[n as usize];
    let lhs = tables.lambda(n);
    Ok(HeathBrownCheck {
        n,
        lhs,
        rhs,
        delta: (lhs - rhs).abs(),
    })
}

/// `max_{n < 2X} |Λ(n) − rhs(n)|`.
pub fn heath_brown_max_delta(j: u32, x: u64, tables: &ArithmeticTables) -> Result<f64> {
    let limit = 2 * x - 1;
    let rhs = heath_brown_table(j, x, limit, tables)?;
    Ok((1..=limit)
        .map(|n| (tables.lambda(n) - rhs[n as usize]).abs())
        .fold(0.0, f64::max))
}

/// Discrepancy of `d_k` in the progression `a mod q` up to `X`.
#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyReport {
    pub x: u64,
    pub q: u64,
    pub a: u64,
    pub k: u32,
    pub progression_sum: f64,
    pub coprime_sum: f64,
    pub phi_q: u64,
    pub main_value: f64,
    pub discrepancy: f64,
    pub reference_scale: f64,
    pub ratio: f64,
}

impl DiscrepancyReport {
    /// `E` recomputed from the stored addends.
    pub fn recompute(&self) -> f64 {
        self.progression_sum - self.coprime_sum / self.phi_q as f64
    }
}

/// `E(d_k; q, a) = Σ_{n≤X, n≡a} d_k(n) − φ(q)^{-1} Σ_{n≤X, (n,q)=1} d_k(n)`, with ratio to `(X/q)/log X`.
pub fn divisor_in_ap(k: u32, x: u64, q: u64, a: u64, tables: &ArithmeticTables) -> Result<DiscrepancyReport> {
    if !(2..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!("divisor order must be 2 or 3, got {k}")));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {q}")));
    }
    let a = a % q;
    if gcd(a, q) != 1 {
        return Err(Error::InvalidArgument(format!("{a} is not a unit mod {q}")));
    }
    need_table(tables, x)?;
    let d = |n: u64| tables.divisor_k(k, n) as u64;
    let mut progression = 0u64;
    let mut coprime = 0u64;
    for n in 1..=x {
        if gcd(n, q) == 1 {
            let v = d(n);
            coprime += v;
            if n % q == a {
                progression += v;
            }
        }
    }
    let phi_q = (1..q).filter(|&r| gcd(r, q) == 1).count() as u64;
    let main_value = coprime as f64 / phi_q as f64;
    let discrepancy = progression as f64 - main_value;
    let reference_scale = x as f64 / q as f64 / (x as f64).ln().max(1.0);
    Ok(DiscrepancyReport {
        x,
        q,
        a,
        k,
        progression_sum: progression as f64,
        coprime_sum: coprime as f64,
        phi_q,
        main_value,
        discrepancy,
        reference_scale,
        ratio: discrepancy.abs() / reference_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_prime_modulus, sieve_tables};
    use crate::tracefn::all_ones;
    use std::sync::Arc;

    #[test]
    fn prime_counts() {
        let t = sieve_tables(100).unwrap();
        let q = Arc::new(make_prime_modulus(11).unwrap());
        assert_eq!(prime_sum(&all_ones(&q), 10, &t, None).unwrap().re, 4.0);
        assert!(prime_sum(&all_ones(&q), 1000, &t, None).is_err());
    }

    #[test]
    fn heath_brown_small() {
        let t = sieve_tables(1000).unwrap();
        let c = heath_brown_check(4, 1, 3, &t).unwrap();
        assert!((c.rhs - 2f64.ln()).abs() < 1e-9);
        let c = heath_brown_check(1, 2, 10, &t).unwrap();
        assert_eq!(c.lhs, 0.0);
        assert!(c.rhs.abs() < 1e-12);
        assert!(heath_brown_max_delta(2, 100, &t).unwrap() < 1e-9);
        assert!(heath_brown_check(200, 2, 100, &t).is_err());
    }

    #[test]
    fn divisor_progression_by_hand() {
        let t = sieve_tables(100).unwrap();
        let r = divisor_in_ap(2, 20, 3, 1, &t).unwrap();
        // n ≡ 1 mod 3: 1,4,7,10,13,16,19 → d = 1,3,2,4,2,5,2
        assert_eq!(r.progression_sum, 19.0);
        let coprime: u32 = (1..=20u64).filter(|n| n % 3 != 0).map(|n| t.d2(n)).sum();
        assert_eq!(r.coprime_sum, coprime as f64);
        assert!((r.recompute() - r.discrepancy).abs() < 1e-9);

        let r = divisor_in_ap(2, 5, 7, 6, &t).unwrap();
        assert_eq!(r.progression_sum, 0.0);
        assert!((r.discrepancy + r.main_value).abs() < 1e-12);
    }
}
