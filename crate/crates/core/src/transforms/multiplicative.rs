use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::dft::{DftPlan, Direction};
use crate::arith::PrimeModulus;
use crate::error::{Error, Result};
use crate::phase::ZERO;
use crate::tracefn::{FamilyMeta, TraceFunction};

/// Largest modulus accepted by [`hyper_kloosterman_all`].
pub const MAX_CONVOLUTION_MODULUS: u64 = 10_000_000;

/// Values of a function on characters of `F_q^×`, indexed by `m` for `x ↦ exp(2πi m·dlog x/(q−1))`.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterSpectrum {
    pub q: u64,
    #[serde(with = "crate::report::complex_vec")]
    pub values: Vec<Complex64>,
}

impl CharacterSpectrum {
    /// Entry at index `m` read modulo `q − 1`.
    pub fn at(&self, m: i64) -> Complex64 {
        let n = self.values.len() as i64;
        self.values[m.rem_euclid(n) as usize]
    }
}

/// `j ↦ K(g^j)` for `j < q − 1`.
fn along_generator(q: &PrimeModulus, values: &[Complex64]) -> Vec<Complex64> {
    q.powers().iter().map(|&x| values[x as usize]).collect()
}

/// Inverse of [`along_generator`], extended by zero at 0.
fn from_generator(q: &PrimeModulus, indexed: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; q.q() as usize];
    for (j, &x) in q.powers().iter().enumerate() {
        out[x as usize] = indexed[j];
    }
    out
}

/// `(K1⋆K2)(x) = q^{-1/2} Σ_{x1 x2 = x} K1(x1) K2(x2)` on `F_q^×`, zero at 0.
pub fn mult_convolution(k1: &TraceFunction, k2: &TraceFunction) -> Result<TraceFunction> {
    if k1.q() != k2.q() {
        return Err(Error::ModulusMismatch {
            left: k1.q(),
            right: k2.q(),
        });
    }
    let q = k1.prime()?;
    let n = q.order() as usize;
    let plan = DftPlan::new(n)?;
    let a = plan.apply(&along_generator(q, k1.values()), Direction::Minus);
    let b = plan.apply(&along_generator(q, k2.values()), Direction::Minus);
    let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    let scale = 1.0 / (n as f64 * (q.q() as f64).sqrt());
    let conv: Vec<Complex64> = plan
        .apply(&prod, Direction::Plus)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    let meta = FamilyMeta::new(format!("{}⋆{}", k1.family(), k2.family()));
    TraceFunction::over_prime(q, from_generator(q, &conv), meta)
}

/// `Kl_k(a; q)` for every `a`, as the `k`-fold multiplicative convolution of `e_q`.
pub fn hyper_kloosterman_all(q: &Arc<PrimeModulus>, k: u32) -> Result<TraceFunction> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "hyper-Kloosterman rank must be at least 2, got {k}"
        )));
    }
    if q.q() > MAX_CONVOLUTION_MODULUS {
        return Err(Error::Capacity(format!(
            "modulus {} exceeds {MAX_CONVOLUTION_MODULUS}",
            q.q()
        )));
    }
    let n = q.order() as usize;
    let plan = DftPlan::new(n)?;
    let psi = along_generator(q, q.e_q_table());
    let spectrum = plan.apply(&psi, Direction::Minus);
    let powered: Vec<Complex64> = spectrum.iter().map(|v| v.powu(k)).collect();
    let scale = 1.0 / (n as f64 * (q.q() as f64).powf((k - 1) as f64 / 2.0));
    let mut kl: Vec<Complex64> = plan
        .apply(&powered, Direction::Plus)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    let real = k % 2 == 0;
    if real {
        kl.iter_mut().for_each(|v| v.im = 0.0);
    }
    let meta = FamilyMeta::new(format!("kl{k}"))
        .param("k", k)
        .real(real)
        .sup_norm(k as f64)
        .conductor(k + 3)
        .describe("hyper-Kloosterman sum, extended by zero at 0");
    TraceFunction::over_prime(q, from_generator(q, &kl), meta)
}

/// `Kl₂(·; q)`.
pub fn kloosterman(q: &Arc<PrimeModulus>) -> Result<TraceFunction> {
    hyper_kloosterman_all(q, 2)
}

/// `ε_χ(a) = q^{-1/2} Σ_{x≠0} χ_m(x) e_q(a x)` by direct summation.
pub fn gauss_sum(q: &PrimeModulus, m: u64, a: u64) -> Complex64 {
    let a = a % q.q();
    let s: Complex64 = (1..q.q())
        .map(|x| q.character(m, x) * q.e_q(q.mul(a, x)))
        .sum();
    s / (q.q() as f64).sqrt()
}

/// `ε_{χ_m}(1)` for every character index `m`.
pub fn gauss_sums_all(q: &PrimeModulus) -> Result<CharacterSpectrum> {
    let psi = along_generator(q, q.e_q_table());
    let s = 1.0 / (q.q() as f64).sqrt();
    let values = DftPlan::new(psi.len())?
        .apply(&psi, Direction::Plus)
        .into_iter()
        .map(|v| v * s)
        .collect();
    Ok(CharacterSpectrum { q: q.q(), values })
}

/// `K̃(m) = (q−1)^{-1/2} Σ_{x≠0} K(x) χ_m(x)`.
pub fn mellin(k: &TraceFunction) -> Result<CharacterSpectrum> {
    let q = k.prime()?;
    let n = q.order() as usize;
    let s = 1.0 / (n as f64).sqrt();
    let values = DftPlan::new(n)?
        .apply(&along_generator(q, k.values()), Direction::Plus)
        .into_iter()
        .map(|v| v * s)
        .collect();
    Ok(CharacterSpectrum { q: q.q(), values })
}

/// `K(x) = (q−1)^{-1/2} Σ_m K̃(m) χ̄_m(x)` on `F_q^×`, zero at 0.
pub fn mellin_inverse(q: &Arc<PrimeModulus>, spectrum: &CharacterSpectrum) -> Result<TraceFunction> {
    let n = q.order() as usize;
    if spectrum.q != q.q() || spectrum.values.len() != n {
        return Err(Error::ModulusMismatch {
            left: q.q(),
            right: spectrum.q,
        });
    }
    let s = 1.0 / (n as f64).sqrt();
    let indexed: Vec<Complex64> = DftPlan::new(n)?
        .apply(&spectrum.values, Direction::Minus)
        .into_iter()
        .map(|v| v * s)
        .collect();
    TraceFunction::over_prime(q, from_generator(q, &indexed), FamilyMeta::new("mellin-inverse"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_prime_modulus;
    use crate::phase::ONE;
    use crate::tracefn::{additive_character, dirac, from_values, kloosterman_direct};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(q: u64) -> Arc<PrimeModulus> {
        Arc::new(make_prime_modulus(q).unwrap())
    }

    fn random(q: &Arc<PrimeModulus>, seed: u64) -> TraceFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = (0..q.q())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        from_values(q, "random", v).unwrap()
    }

    fn brute_convolution(k1: &TraceFunction, k2: &TraceFunction, q: &PrimeModulus) -> Vec<Complex64> {
        let mut out = vec![ZERO; q.q() as usize];
        for x1 in 1..q.q() {
            for x2 in 1..q.q() {
                out[q.mul(x1, x2) as usize] += k1.get(x1) * k2.get(x2);
            }
        }
        out.iter().map(|v| v / (q.q() as f64).sqrt()).collect()
    }

    #[test]
    fn psi_star_psi_is_kl2() {
        let q = field(101);
        let psi = additive_character(&q);
        let c = mult_convolution(&psi, &psi).unwrap();
        let kl = kloosterman(&q).unwrap();
        for a in 1..101 {
            let d = kloosterman_direct(&q, 2, a).unwrap();
            assert!((c.get(a) - d).norm() < 1e-9);
            assert!((kl.get(a) - d).norm() < 1e-9);
        }
    }

    #[test]
    fn dirac_one_is_unit() {
        let q = field(53);
        let k = random(&q, 1);
        let c = mult_convolution(&k, &dirac(&q, 1)).unwrap();
        for x in 1..53 {
            assert!((c.get(x) * 53f64.sqrt() - k.get(x)).norm() < 1e-12);
        }
    }

    #[test]
    fn matches_brute_force_and_associates() {
        let q = field(53);
        let (a, b, c) = (random(&q, 1), random(&q, 2), random(&q, 3));
        let ab = mult_convolution(&a, &b).unwrap();
        let brute = brute_convolution(&a, &b, &q);
        for x in 1..53 {
            assert!((ab.get(x) - brute[x as usize]).norm() < 1e-12);
        }
        let left = mult_convolution(&ab, &c).unwrap();
        let right = mult_convolution(&a, &mult_convolution(&b, &c).unwrap()).unwrap();
        for x in 0..53 {
            assert!((left.get(x) - right.get(x)).norm() < 1e-9);
        }
    }

    #[test]
    fn kl3_matches_direct() {
        let q = field(101);
        let kl3 = hyper_kloosterman_all(&q, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let a = rng.gen_range(1..101);
            let d = kloosterman_direct(&q, 3, a).unwrap();
            assert!((kl3.get(a) - d).norm() < 1e-9);
        }
    }

    #[test]
    fn q5_value() {
        let kl = kloosterman(&field(5)).unwrap();
        assert!((kl.get(1).re - 0.170_820_4).abs() < 1e-7);
    }

    #[test]
    fn deligne_bound_kl4() {
        let kl = hyper_kloosterman_all(&field(1009), 4).unwrap();
        assert!(kl.sup_norm_observed() <= 4.0 + 1e-9);
    }

    #[test]
    fn guards() {
        assert!(hyper_kloosterman_all(&field(7), 1).is_err());
    }

    #[test]
    fn gauss_sums() {
        for p in [5u64, 13, 17, 101, 103] {
            let q = field(p);
            let all = gauss_sums_all(&q).unwrap();
            for m in 1..p - 1 {
                let e1 = gauss_sum(&q, m, 1);
                assert!((all.values[m as usize] - e1).norm() < 1e-10);
                assert!((e1.norm() - 1.0).abs() < 1e-9);
                for a in [2u64, 3, p - 1] {
                    let lhs = gauss_sum(&q, m, a);
                    let rhs = q.character(m, a).conj() * e1;
                    assert!((lhs - rhs).norm() < 1e-9);
                }
            }
            if p % 4 == 1 {
                let e = gauss_sum(&q, (p - 1) / 2, 1);
                assert!((e - ONE).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mellin_of_ones_and_inversion() {
        let q = field(101);
        let ones = from_values(&q, "ones-star", {
            let mut v = vec![ONE; 101];
            v[0] = ZERO;
            v
        })
        .unwrap();
        let s = mellin(&ones).unwrap();
        assert!((s.values[0].re - 100f64.sqrt()).abs() < 1e-12);
        assert!(s.values[1..].iter().all(|v| v.norm() < 1e-12));

        let k = random(&q, 11);
        let spec = mellin(&k).unwrap();
        let back = mellin_inverse(&q, &spec).unwrap();
        for x in 1..101 {
            assert!((back.get(x) - k.get(x)).norm() < 1e-9);
        }
        let lhs: f64 = spec.values.iter().map(|v| v.norm_sqr()).sum();
        let rhs: f64 = k.values()[1..].iter().map(|v| v.norm_sqr()).sum();
        assert!((lhs - rhs).abs() < 1e-9);
    }
}
