use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::PrimeModulus;
use crate::error::{Error, Result};
use crate::tracefn::{Pgl2Element, TraceFunction};

/// `q^{-1} Σ_x K1(x) conj(K2(x))`.
pub fn correlation(k1: &TraceFunction, k2: &TraceFunction) -> Result<Complex64> {
    if k1.q() != k2.q() {
        return Err(Error::ModulusMismatch {
            left: k1.q(),
            right: k2.q(),
        });
    }
    let s: Complex64 = k1
        .values()
        .iter()
        .zip(k2.values())
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(s / k1.q() as f64)
}

/// One factor of a multicorrelation: `K(γ·x)` or its conjugate.
#[derive(Debug, Clone, Copy)]
pub struct Shifted {
    pub gamma: Pgl2Element,
    pub conjugate: bool,
}

/// `q^{-1} Σ_x Π_i K(γ_i x)^{(conj)} e_q(hx)`, dropping `x` where some `γ_i x = ∞`.
pub fn multicorrelation(k: &TraceFunction, factors: &[Shifted], h: u64) -> Result<Complex64> {
    let q = k.prime()?;
    for f in factors {
        if f.gamma.modulus() != q.q() {
            return Err(Error::ModulusMismatch {
                left: q.q(),
                right: f.gamma.modulus(),
            });
        }
    }
    let mut total = Complex64::new(0.0, 0.0);
    'x: for x in 0..q.q() {
        let mut term = q.e_q(q.mul(x, h));
        for f in factors {
            let Some(y) = f.gamma.apply(x) else {
                continue 'x;
            };
            let v = k.get(y);
            term *= if f.conjugate { v.conj() } else { v };
        }
        total += term;
    }
    Ok(total / q.q() as f64)
}

/// `Σ_{r≠0} Π_i K(l̄_i r)`.
pub fn khan_ngo_sum(k: &TraceFunction, ls: &[u64]) -> Result<Complex64> {
    let q = k.prime()?;
    let inv: Vec<u64> = ls
        .iter()
        .map(|&l| {
            q.inv(l).ok_or_else(|| {
                Error::InvalidArgument(format!("shift {l} is not a unit mod {}", q.q()))
            })
        })
        .collect::<Result<_>>()?;
    Ok((1..q.q())
        .map(|r| inv.iter().map(|&li| k.get(q.mul(li, r))).product::<Complex64>())
        .sum())
}

/// True when the multiset of `ls` mod `q` splits into pairs of equal entries.
pub fn is_paired(ls: &[u64], q: u64) -> bool {
    let mut v: Vec<u64> = ls.iter().map(|l| l % q).collect();
    v.sort_unstable();
    v.len() % 2 == 0 && v.chunks(2).all(|c| c[0] == c[1])
}

/// `M_{2l} = q^{-1} Σ_x |K(x)|^{2l}`, with `|0|⁰ = 1`.
pub fn moment(k: &TraceFunction, l: u32) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let s: f64 = k.values().iter().map(|v| v.norm_sqr().powi(l as i32)).sum();
    s / k.q() as f64
}

/// Exact `Σ_{c≠0} |Σ_{x≠0} e_q(c x + x̄)|⁴` from the count of
/// `x ∈ (F_q^×)⁴` with `x1+x2 = x3+x4` and `x̄1+x̄2 = x̄3+x̄4`.
pub fn kloosterman_fourth_power_sum_oracle(q: &PrimeModulus) -> u128 {
    let p = q.q();
    let mut hist = vec![0u32; (p * p) as usize];
    for x1 in 1..p {
        let i1 = q.inv(x1).unwrap();
        for x2 in 1..p {
            let s = q.add(x1, x2);
            let t = q.add(i1, q.inv(x2).unwrap());
            hist[(s * p + t) as usize] += 1;
        }
    }
    let n: u128 = hist.par_iter().map(|&c| (c as u128) * (c as u128)).sum();
    let p = p as u128;
    let full = p * p * n;
    (full - 2 * (p - 1) - (p - 1).pow(4)) / (p - 1)
}

/// `2q³ − 3q² − 3q − 1`.
pub fn kloosterman_fourth_power_sum_closed(q: u64) -> u128 {
    let q = q as u128;
    2 * q * q * q - 3 * q * q - 3 * q - 1
}

/// `Σ_{a≠0} |Kl₂(a;q)|⁴` from computed values.
pub fn kloosterman_fourth_moment(kl2: &TraceFunction) -> f64 {
    kl2.values()[1..].iter().map(|v| v.norm_sqr().powi(2)).sum()
}
