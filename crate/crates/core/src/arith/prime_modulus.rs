use std::sync::OnceLock;

use num_complex::Complex64;

use super::modular::{factorize, is_prime, pow_mod};
use crate::error::{Error, Result};
use crate::phase::unit_root;

/// Largest modulus for which the full discrete-log tables are built.
pub const MAX_TABLE_MODULUS: u64 = 100_000_000;

/// A prime field `F_q` with a primitive root and dense discrete-log tables.
///
/// `dlog[x]` is the index of `x` base `g` for `x` in `1..q`; `powers[j] = g^j`.
/// The additive-character table `e_q(j)` is built lazily on first use.
pub struct PrimeModulus {
    q: u64,
    g: u64,
    dlog: Vec<u32>,
    powers: Vec<u32>,
    roots: OnceLock<Vec<Complex64>>,
}

impl std::fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimeModulus")
            .field("q", &self.q)
            .field("g", &self.g)
            .finish()
    }
}

impl PartialEq for PrimeModulus {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

/// Least primitive root of the prime `q`, found by the order test on the prime factors of `q-1`.
pub fn least_primitive_root(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let phi = q - 1;
    let divisors: Vec<u64> = factorize(phi).into_iter().map(|(p, _)| p).collect();
    (2..q)
        .find(|&g| divisors.iter().all(|&r| pow_mod(g, phi / r, q) != 1))
        .expect("a prime field has a primitive root")
}

impl PrimeModulus {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 {
            return Err(Error::invalid_modulus(q, "prime modulus must be at least 3"));
        }
        if q >= 1 << 31 {
            return Err(Error::invalid_modulus(q, "prime modulus must be below 2^31"));
        }
        if !is_prime(q) {
            return Err(Error::invalid_modulus(q, "not prime"));
        }
        if q > MAX_TABLE_MODULUS {
            return Err(Error::Capacity(format!(
                "discrete-log tables for q={q} exceed the ceiling {MAX_TABLE_MODULUS}"
            )));
        }
        let g = least_primitive_root(q);
        let n = (q - 1) as usize;
        let mut dlog = vec![u32::MAX; q as usize];
        let mut powers = Vec::with_capacity(n);
        let mut x = 1u64;
        for j in 0..n {
            powers.push(x as u32);
            dlog[x as usize] = j as u32;
            x = x * g % q;
        }
        Ok(Self {
            q,
            g,
            dlog,
            powers,
            roots: OnceLock::new(),
        })
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order of the multiplicative group, `q - 1`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.q - 1
    }

    #[inline]
    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Discrete logarithm base `g`; `None` for `x ≡ 0`.
    #[inline]
    pub fn dlog(&self, x: u64) -> Option<u64> {
        let x = x % self.q;
        if x == 0 {
            None
        } else {
            Some(self.dlog[x as usize] as u64)
        }
    }

    /// `g^j` for any exponent.
    #[inline]
    pub fn pow_g(&self, j: u64) -> u64 {
        self.powers[(j % (self.q - 1)) as usize] as u64
    }

    /// Powers of the generator in index order, `g^0, g^1, …, g^(q-2)`.
    pub fn powers(&self) -> &[u32] {
        &self.powers
    }

    #[inline]
    pub fn inv(&self, x: u64) -> Option<u64> {
        let j = self.dlog(x)?;
        Some(self.pow_g((self.q - 1 - j) % (self.q - 1)))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a % self.q) * (b % self.q) % self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a % self.q + b % self.q) % self.q
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }

    #[inline]
    pub fn reduce(&self, a: i64) -> u64 {
        super::modular::reduce_i64(a, self.q)
    }

    /// Table of `e_q(j) = exp(2πi·j/q)` for `j` in `0..q`.
    pub fn e_q_table(&self) -> &[Complex64] {
        self.roots
            .get_or_init(|| (0..self.q).map(|j| unit_root(j, self.q)).collect())
    }

    #[inline]
    pub fn e_q(&self, x: u64) -> Complex64 {
        self.e_q_table()[(x % self.q) as usize]
    }

    /// Multiplicative character of index `m`: `x ↦ exp(2πi·m·dlog(x)/(q-1))`, zero at `0`.
    #[inline]
    pub fn character(&self, m: u64, x: u64) -> Complex64 {
        match self.dlog(x) {
            None => Complex64::new(0.0, 0.0),
            Some(j) => {
                let n = self.q - 1;
                unit_root(((m % n) as u128 * j as u128 % n as u128) as u64, n)
            }
        }
    }

    /// Legendre symbol `(a/q)` from the parity of the discrete log.
    #[inline]
    pub fn legendre(&self, a: u64) -> i32 {
        match self.dlog(a) {
            None => 0,
            Some(j) if j % 2 == 0 => 1,
            Some(_) => -1,
        }
    }
}

/// Convenience constructor mirroring [`PrimeModulus::new`].
pub fn make_prime_modulus(q: u64) -> Result<PrimeModulus> {
    PrimeModulus::new(q)
}

/// Legendre symbol `(a/q)`.
pub fn legendre(a: u64, q: &PrimeModulus) -> i32 {
    q.legendre(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::modular::pow_mod;

    #[test]
    fn q7_generator_and_log() {
        let m = PrimeModulus::new(7).unwrap();
        assert_eq!(m.generator(), 3);
        assert_eq!(m.dlog(2), Some(2));
    }

    #[test]
    fn q3_smallest_field() {
        let m = PrimeModulus::new(3).unwrap();
        assert_eq!(m.generator(), 2);
        assert_eq!(m.dlog(1), Some(0));
        assert_eq!(m.dlog(2), Some(1));
    }

    #[test]
    fn q101_order_test() {
        let m = PrimeModulus::new(101).unwrap();
        let g = m.generator();
        for r in [2u64, 5] {
            assert_ne!(pow_mod(g, 100 / r, 101), 1);
        }
    }

    #[test]
    fn composite_and_tiny_moduli_rejected() {
        assert!(matches!(PrimeModulus::new(15), Err(Error::InvalidModulus { .. })));
        assert!(matches!(PrimeModulus::new(2), Err(Error::InvalidModulus { .. })));
        assert!(matches!(PrimeModulus::new(1), Err(Error::InvalidModulus { .. })));
    }

    #[test]
    fn legendre_examples() {
        let m = PrimeModulus::new(7).unwrap();
        assert_eq!(legendre(2, &m), 1);
        assert_eq!(legendre(0, &m), 0);
        assert_eq!(legendre(3, &m), -1);
    }

    #[test]
    fn roots_table_accuracy() {
        let m = PrimeModulus::new(10007).unwrap();
        let t = m.e_q_table();
        for j in (0..10007u64).step_by(97) {
            let a = 2.0 * std::f64::consts::PI * j as f64 / 10007.0;
            assert!((t[j as usize].re - a.cos()).abs() < 1e-14);
            assert!((t[j as usize].im - a.sin()).abs() < 1e-14);
            assert!((t[j as usize].norm() - 1.0).abs() < 1e-15);
        }
    }
}
