use std::sync::Arc;

use num_complex::Complex64;

use super::function::{FamilyMeta, TraceFunction};
use crate::arith::PrimeModulus;
use crate::error::Result;
use crate::phase::{ONE, ZERO};

pub fn product(k1: &TraceFunction, k2: &TraceFunction) -> Result<TraceFunction> {
    k1.check_same_modulus(k2)?;
    let values = k1
        .values()
        .iter()
        .zip(k2.values())
        .map(|(a, b)| a * b)
        .collect();
    let m1 = k1.meta();
    let m2 = k2.meta();
    let mut meta = FamilyMeta::new(format!("{}*{}", m1.family, m2.family))
        .real(m1.real_valued && m2.real_valued);
    if let (Some(a), Some(b)) = (m1.sup_norm, m2.sup_norm) {
        meta = meta.sup_norm(a * b);
    }
    TraceFunction::new(k1.modulus().clone(), values, meta)
}

pub fn conjugate(k: &TraceFunction) -> TraceFunction {
    let values = k.values().iter().map(|v| v.conj()).collect();
    let mut meta = k.meta().clone();
    meta.family = format!("conj({})", meta.family);
    TraceFunction::new(k.modulus().clone(), values, meta).expect("conjugation preserves contracts")
}

pub fn scale(k: &TraceFunction, s: Complex64) -> TraceFunction {
    let values = k.values().iter().map(|v| v * s).collect();
    let mut meta = k.meta().clone();
    meta.family = format!("scale({})", meta.family);
    meta.real_valued &= s.im == 0.0;
    meta.sup_norm = meta.sup_norm.map(|b| b * s.norm());
    TraceFunction::new(k.modulus().clone(), values, meta).expect("scaled bounds")
}

/// Indicator of the point `a`.
pub fn dirac(q: &Arc<PrimeModulus>, a: u64) -> TraceFunction {
    let mut values = vec![ZERO; q.q() as usize];
    values[(a % q.q()) as usize] = ONE;
    let meta = FamilyMeta::new("dirac")
        .param("a", a % q.q())
        .real(true)
        .sup_norm(1.0);
    TraceFunction::over_prime(q, values, meta).expect("valid")
}

/// The constant function 1.
pub fn all_ones(q: &Arc<PrimeModulus>) -> TraceFunction {
    let meta = FamilyMeta::new("one").real(true).sup_norm(1.0).conductor(1);
    TraceFunction::over_prime(q, vec![ONE; q.q() as usize], meta).expect("valid")
}

/// Arbitrary values over `F_q` with no family contract.
pub fn from_values(q: &Arc<PrimeModulus>, family: &str, values: Vec<Complex64>) -> Result<TraceFunction> {
    TraceFunction::over_prime(q, values, FamilyMeta::new(family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_prime_modulus;
    use crate::tracefn::families::additive_character;

    #[test]
    fn product_with_one_and_double_conjugate() {
        let q = Arc::new(make_prime_modulus(13).unwrap());
        let k = additive_character(&q);
        assert_eq!(product(&k, &all_ones(&q)).unwrap().values(), k.values());
        assert_eq!(conjugate(&conjugate(&k)).values(), k.values());
    }

    #[test]
    fn dirac_values() {
        let q = Arc::new(make_prime_modulus(5).unwrap());
        let d = dirac(&q, 2);
        let re: Vec<f64> = d.values().iter().map(|v| v.re).collect();
        assert_eq!(re, vec![0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn product_modulus_mismatch() {
        let a = all_ones(&Arc::new(make_prime_modulus(5).unwrap()));
        let b = all_ones(&Arc::new(make_prime_modulus(7).unwrap()));
        assert!(matches!(
            product(&a, &b),
            Err(crate::Error::ModulusMismatch { .. })
        ));
    }
}
