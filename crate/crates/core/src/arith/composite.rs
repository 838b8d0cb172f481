use super::modular::{factorize, inv_mod};
use crate::error::{Error, Result};

/// Odd squarefree modulus `c` with its prime factors and the cofactor inverses `(c/p)^(-1) mod p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeModulus {
    c: u64,
    factors: Vec<u64>,
    cofactor_inverses: Vec<u64>,
}

impl CompositeModulus {
    pub fn new(c: u64) -> Result<Self> {
        if c < 3 {
            return Err(Error::invalid_modulus(c, "composite modulus must be at least 3"));
        }
        if c % 2 == 0 {
            return Err(Error::invalid_modulus(c, "modulus must be odd"));
        }
        let fac = factorize(c);
        if fac.iter().any(|&(_, e)| e > 1) {
            return Err(Error::invalid_modulus(c, "modulus must be squarefree"));
        }
        let factors: Vec<u64> = fac.into_iter().map(|(p, _)| p).collect();
        let cofactor_inverses = factors
            .iter()
            .map(|&p| inv_mod((c / p) % p, p).expect("cofactor of a squarefree modulus is a unit"))
            .collect();
        Ok(Self {
            c,
            factors,
            cofactor_inverses,
        })
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn cofactor_inverses(&self) -> &[u64] {
        &self.cofactor_inverses
    }

    /// Number of distinct prime factors, `ω(c)`.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }
}

pub fn make_composite_modulus(c: u64) -> Result<CompositeModulus> {
    CompositeModulus::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c15() {
        let m = CompositeModulus::new(15).unwrap();
        assert_eq!(m.factors(), &[3, 5]);
        assert_eq!(m.cofactor_inverses()[0], 2);
        assert_eq!(m.cofactor_inverses()[1], 2); // 3^-1 mod 5
    }

    #[test]
    fn prime_case_has_trivial_cofactor() {
        let m = CompositeModulus::new(7).unwrap();
        assert_eq!(m.factors(), &[7]);
        assert_eq!(m.cofactor_inverses(), &[1]);
    }

    #[test]
    fn c105_and_rejections() {
        assert_eq!(CompositeModulus::new(105).unwrap().factors(), &[3, 5, 7]);
        assert!(CompositeModulus::new(45).is_err());
        assert!(CompositeModulus::new(30).is_err());
    }

    #[test]
    fn cofactor_invariant() {
        for c in (3..2000u64).step_by(2) {
            if let Ok(m) = CompositeModulus::new(c) {
                assert_eq!(m.factors().iter().product::<u64>(), c);
                for (&p, &inv) in m.factors().iter().zip(m.cofactor_inverses()) {
                    assert_eq!((c / p) % p * inv % p, 1 % p);
                }
            }
        }
    }
}
