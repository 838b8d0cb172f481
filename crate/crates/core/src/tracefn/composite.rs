use num_complex::Complex64;
use serde::Serialize;

use crate::arith::modular::{batch_inverse, factorize, gcd, mul_mod};
use crate::arith::CompositeModulus;
use crate::error::{Error, Result};
use crate::phase::{root_table, ZERO};

/// `Kl₂(a; c)` evaluated by the direct sum and by twisted multiplicativity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CompositeKloosterman {
    pub c: u64,
    pub a: u64,
    #[serde(with = "crate::report::complex")]
    pub direct: Complex64,
    #[serde(with = "crate::report::complex")]
    pub factored: Complex64,
}

impl CompositeKloosterman {
    pub fn discrepancy(&self) -> f64 {
        (self.direct - self.factored).norm()
    }
}

/// `c^{-1/2} Σ_{x ∈ (Z/c)^×} e((x̄ + a x)/c)` for any odd `c ≥ 3`.
pub fn kl2_direct(c: u64, a: u64) -> Complex64 {
    kl2_direct_many(c, &[a])[0]
}

/// [`kl2_direct`] at several arguments sharing one inverse and root table.
pub fn kl2_direct_many(c: u64, args: &[u64]) -> Vec<Complex64> {
    let mut coprime = vec![true; c as usize];
    coprime[0] = c == 1;
    for (p, _) in factorize(c) {
        for m in (0..c).step_by(p as usize) {
            coprime[m as usize] = false;
        }
    }
    let units: Vec<u64> = (1..c).filter(|&x| coprime[x as usize]).collect();
    let inverses = batch_inverse(&units, c).expect("units are invertible");
    let roots = root_table(c);
    let norm = 1.0 / (c as f64).sqrt();
    args.iter()
        .map(|&a| {
            let a = a % c;
            let mut s = ZERO;
            let (mut ax, mut prev) = (0u64, 0u64);
            for (&x, &xi) in units.iter().zip(&inverses) {
                ax = (ax + mul_mod(a, x - prev, c)) % c;
                prev = x;
                let e = xi + ax;
                s += roots[(if e >= c { e - c } else { e }) as usize];
            }
            s * norm
        })
        .collect()
}

pub fn composite_kloosterman(c: &CompositeModulus, a: u64) -> Result<CompositeKloosterman> {
    Ok(composite_kloosterman_many(c, &[a])?.remove(0))
}

/// [`composite_kloosterman`] at several arguments, sharing the direct-sum tables.
pub fn composite_kloosterman_many(c: &CompositeModulus, args: &[u64]) -> Result<Vec<CompositeKloosterman>> {
    let n = c.c();
    let args: Vec<u64> = args.iter().map(|a| a % n).collect();
    if let Some(a) = args.iter().find(|&&a| gcd(a, n) != 1) {
        return Err(Error::InvalidArgument(format!(
            "Kloosterman argument {a} is not a unit mod {n}"
        )));
    }
    let direct = kl2_direct_many(n, &args);
    Ok(args
        .iter()
        .zip(direct)
        .map(|(&a, direct)| {
            let mut factored = Complex64::new(1.0, 0.0);
            for (&p, &cofactor_inv) in c.factors().iter().zip(c.cofactor_inverses()) {
                let twist = mul_mod(a % p, mul_mod(cofactor_inv, cofactor_inv, p), p);
                factored *= kl2_direct(p, twist);
            }
            if c.factors().is_empty() {
                factored = ZERO;
            }
            CompositeKloosterman {
                c: n,
                a,
                direct,
                factored,
            }
        })
        .collect())
}
