use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::bump::SmoothBump;
use crate::error::{Error, Result};
use crate::tracefn::TraceFunction;

/// Coefficients `α_m` for `m ∈ [M, 2M)`, each of modulus at most 1.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientSequence {
    offset: u64,
    values: Vec<Complex64>,
}

impl CoefficientSequence {
    pub fn new(offset: u64, values: Vec<Complex64>) -> Result<Self> {
        if offset == 0 || values.len() as u64 != offset {
            return Err(Error::InvalidArgument(format!(
                "coefficients on [M, 2M) need M ≥ 1 and M values, got M={offset}, {} values",
                values.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.norm() > 1.0 + 1e-12) {
            return Err(Error::BoundViolation {
                bound: format!("|α_{}| ≤ 1", offset + i as u64),
                observed: v.norm(),
                allowed: 1.0,
            });
        }
        Ok(Self { offset, values })
    }

    pub fn ones(offset: u64) -> Self {
        Self::new(offset, vec![Complex64::new(1.0, 0.0); offset as usize]).expect("valid")
    }

    /// Seeded random signs.
    pub fn random_signs(offset: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..offset)
            .map(|_| Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0))
            .collect();
        Self::new(offset, values).expect("valid")
    }

    /// Single nonzero entry `α_m = 1`.
    pub fn indicator(offset: u64, m: u64) -> Result<Self> {
        let mut values = vec![Complex64::new(0.0, 0.0); offset as usize];
        if m < offset || m >= 2 * offset {
            return Err(Error::InvalidArgument(format!("{m} outside [{offset}, {})", 2 * offset)));
        }
        values[(m - offset) as usize] = Complex64::new(1.0, 0.0);
        Self::new(offset, values)
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.offset + i as u64, v))
    }

    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BilinearReport {
    #[serde(with = "crate::report::complex")]
    pub value: Complex64,
    pub bound_ratio: f64,
}

/// `B = Σ α_m β_n K(mn)` and `|B| / (‖α‖‖β‖ (MN)^{1/2} (1/M + √q log q / N)^{1/2})`.
pub fn bilinear_form(
    k: &TraceFunction,
    alpha: &CoefficientSequence,
    beta: &CoefficientSequence,
) -> Result<BilinearReport> {
    let q = k.q();
    let (m, n) = (alpha.offset(), beta.offset());
    if m >= q || n >= q {
        return Err(Error::InvalidArgument(format!(
            "bilinear ranges M={m}, N={n} must be below q={q}"
        )));
    }
    let value: Complex64 = alpha
        .iter()
        .map(|(mi, a)| a * beta.iter().map(|(ni, b)| b * k.get(mi * ni % q)).sum::<Complex64>())
        .sum();
    let (mf, nf, qf) = (m as f64, n as f64, q as f64);
    let scale = alpha.l2_norm()
        * beta.l2_norm()
        * (mf * nf).sqrt()
        * (1.0 / mf + qf.sqrt() * qf.ln() / nf).sqrt();
    Ok(BilinearReport {
        value,
        bound_ratio: value.norm() / scale,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AbShiftReport {
    #[serde(with = "crate::report::complex")]
    pub value: Complex64,
    pub l: u32,
    /// `MN (N²M / q^{1+1/l})^{-1/(2l)}`.
    pub reference: f64,
    pub ratio: f64,
}

/// `Σ_m α_m Σ_n V(n/N) K(mn)` with its ratio to the `+ab`-shift bound shape at `l`.
pub fn ab_shift_sum(
    k: &TraceFunction,
    alpha: &CoefficientSequence,
    n: f64,
    v: &SmoothBump,
    l: u32,
) -> Result<AbShiftReport> {
    let q = k.q() as f64;
    let m = alpha.offset() as f64;
    if m * n >= q {
        return Err(Error::InvalidArgument(format!(
            "type I sum needs MN < q, got M={m}, N={n}, q={q}"
        )));
    }
    if l == 0 {
        return Err(Error::InvalidArgument("l must be at least 1".into()));
    }
    let lo = n.floor() as u64 + 1;
    let hi = (2.0 * n).ceil() as u64;
    let value: Complex64 = alpha
        .iter()
        .map(|(mi, a)| {
            a * (lo..hi)
                .map(|ni| k.get(mi * ni) * v.value(ni as f64 / n))
                .sum::<Complex64>()
        })
        .sum();
    let lf = l as f64;
    let reference = m * n * (n * n * m / q.powf(1.0 + 1.0 / lf)).powf(-1.0 / (2.0 * lf));
    Ok(AbShiftReport {
        value,
        l,
        reference,
        ratio: value.norm() / reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_prime_modulus, PrimeModulus};
    use crate::sums::smoothed_sum;
    use crate::tracefn::{legendre_character, multiplicative_shift};
    use std::sync::Arc;

    fn field(q: u64) -> Arc<PrimeModulus> {
        Arc::new(make_prime_modulus(q).unwrap())
    }

    #[test]
    fn coefficient_contract() {
        assert!(CoefficientSequence::new(2, vec![Complex64::new(1.5, 0.0); 2]).is_err());
        assert!(CoefficientSequence::new(2, vec![Complex64::new(1.0, 0.0); 3]).is_err());
        let a = CoefficientSequence::random_signs(31, 1);
        let b = CoefficientSequence::random_signs(31, 1);
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn bilinear_small_cases() {
        let q = field(101);
        let chi = legendre_character(&q);
        let one = CoefficientSequence::ones(1);
        let r = bilinear_form(&chi, &one, &one).unwrap();
        assert_eq!(r.value, chi.get(1));
        let ones = CoefficientSequence::ones(7);
        let r = bilinear_form(&chi, &ones, &ones).unwrap();
        assert!(r.value.norm() <= 49.0);
    }

    #[test]
    fn ab_shift_single_coefficient() {
        let q = field(1009);
        let chi = legendre_character(&q);
        let v = SmoothBump::new();
        let alpha = CoefficientSequence::indicator(10, 13).unwrap();
        let r = ab_shift_sum(&chi, &alpha, 50.0, &v, 2).unwrap();
        let direct = smoothed_sum(&multiplicative_shift(&chi, 13).unwrap(), &v, 50.0);
        assert!((r.value - direct).norm() < 1e-12);
    }
}
