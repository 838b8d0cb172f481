use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::angles::{extract_angles, ks_distance, AngleSample, Domain, Provenance};
use super::measure::SpectralMeasure;
use crate::arith::modular::mul_mod;
use crate::arith::{primes_in_range, ArithmeticTables, PrimeModulus, RationalFunctionModQ};
use crate::error::{Error, Result};
use crate::tracefn::{birch_family, elliptic_trace, kl2_direct, salie_family};
use crate::transforms::{gauss_sums_all, kloosterman};

/// Kloosterman angles `θ_{q,a}` over `a ∈ F_q^×`.
pub fn kloosterman_angles(q: &Arc<PrimeModulus>) -> Result<AngleSample> {
    extract_angles(&kloosterman(q)?, &Domain::Units)
}

/// Nonzero squares mod `q`, in increasing order.
pub fn nonzero_squares(q: &PrimeModulus) -> Vec<u64> {
    (1..q.q()).filter(|&a| q.legendre(a) == 1).collect()
}

/// Angles of the rotated Salié sums over the nonzero squares, where they do not vanish.
pub fn salie_angles(q: &Arc<PrimeModulus>) -> Result<AngleSample> {
    let s = salie_family(q)?;
    let mut sample = extract_angles(&s, &Domain::Points(nonzero_squares(q)))?;
    sample.provenance = Provenance::new("salie", q.q()).param("domain", "nonzero squares");
    Ok(sample)
}

/// Arguments of the Gauss sums `ε_χ(1)`, `χ ≠ 1`, with the largest `||ε| − 1|`.
#[derive(Debug, Clone, Serialize)]
pub struct GaussSurvey {
    pub sample: AngleSample,
    pub max_modulus_error: f64,
    pub ks_uniform_circle: f64,
}

pub fn gauss_angle_survey(q: &Arc<PrimeModulus>) -> Result<GaussSurvey> {
    if q.q() < 5 {
        return Err(Error::InvalidArgument(format!(
            "Gauss survey needs q ≥ 5, got {}",
            q.q()
        )));
    }
    let spectrum = gauss_sums_all(q)?;
    let vals = &spectrum.values[1..];
    let max_modulus_error = vals.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max);
    let angles = vals.iter().map(|v| v.arg().rem_euclid(2.0 * PI)).collect();
    let sample = AngleSample::on_circle(angles, Provenance::new("gauss", q.q()))?;
    let ks_uniform_circle = ks_distance(&sample, SpectralMeasure::UniformCircle)?;
    Ok(GaussSurvey {
        sample,
        max_modulus_error,
        ks_uniform_circle,
    })
}

/// Largest modulus for the exhaustive Birch survey.
pub const BIRCH_FULL_MAX: u64 = 250;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BirchMode {
    Full,
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct BirchSurvey {
    pub sample: AngleSample,
    /// Singular pairs skipped.
    pub excluded: u64,
    /// `#{(a,b) : 4a³ + 27b² = 0}` counted directly.
    pub discriminant_zero: u64,
    pub ks_sato_tate: f64,
}

/// `#{(a,b) ∈ F_q² : 4a³ + 27b² ≡ 0}`.
pub fn discriminant_zero_count(q: &PrimeModulus) -> u64 {
    let p = q.q();
    let mut cubes = vec![0u64; p as usize];
    for a in 0..p {
        cubes[(4 * mul_mod(mul_mod(a, a, p), a, p) % p) as usize] += 1;
    }
    (0..p)
        .map(|b| cubes[((p - 27 * mul_mod(b, b, p) % p) % p) as usize])
        .sum()
}

fn birch_angle(q: &PrimeModulus, a: u64, b: u64) -> Option<f64> {
    let scale = 2.0 * (q.q() as f64).sqrt();
    elliptic_trace(q, a, b).map(|t| (t as f64 / scale).clamp(-1.0, 1.0).acos())
}

pub fn birch_vertical_survey(q: &Arc<PrimeModulus>, mode: BirchMode) -> Result<BirchSurvey> {
    let p = q.q();
    let pairs: Vec<(u64, u64)> = match mode {
        BirchMode::Full => {
            if p > BIRCH_FULL_MAX {
                return Err(Error::Capacity(format!(
                    "full Birch survey limited to q ≤ {BIRCH_FULL_MAX}, got {p}"
                )));
            }
            (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).collect()
        }
        BirchMode::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..pairs).map(|_| (rng.gen_range(0..p), rng.gen_range(0..p))).collect()
        }
    };
    let traces: Vec<Option<f64>> = pairs.par_iter().map(|&(a, b)| birch_angle(q, a, b)).collect();
    let excluded = traces.iter().filter(|t| t.is_none()).count() as u64;
    let angles: Vec<f64> = traces.into_iter().flatten().collect();
    let mut prov = Provenance::new("birch", p);
    prov = match mode {
        BirchMode::Full => prov.param("mode", "full"),
        BirchMode::Sampled { pairs, seed } => {
            prov.param("mode", "sampled").param("pairs", pairs).param("seed", seed)
        }
    };
    let sample = AngleSample::new(angles, prov)?;
    let ks_sato_tate = ks_distance(&sample, SpectralMeasure::SatoTate)?;
    Ok(BirchSurvey {
        sample,
        excluded,
        discriminant_zero: discriminant_zero_count(q),
        ks_sato_tate,
    })
}

/// Angles of `y² = x³ + a(t)x + b(t)` over the nonsingular fibres `t ∈ F_q`.
pub fn birch_family_survey(
    q: &Arc<PrimeModulus>,
    a_poly: &[i64],
    b_poly: &[i64],
) -> Result<(AngleSample, f64)> {
    let p = q.q();
    let fa = RationalFunctionModQ::polynomial(p, a_poly);
    let fb = RationalFunctionModQ::polynomial(p, b_poly);
    let family = birch_family(q, &fa, &fb)?;
    let smooth: Vec<u64> = (0..p)
        .filter(|&t| {
            let (a, b) = (poly_eval(q, a_poly, t), poly_eval(q, b_poly, t));
            (4 * mul_mod(mul_mod(a, a, p), a, p) + 27 * mul_mod(b, b, p)) % p != 0
        })
        .collect();
    let mut sample = extract_angles(&family, &Domain::Points(smooth))?;
    sample.provenance = Provenance::new("birch_family", p)
        .param("a", format!("{a_poly:?}"))
        .param("b", format!("{b_poly:?}"));
    let ks = ks_distance(&sample, SpectralMeasure::SatoTate)?;
    Ok((sample, ks))
}

fn poly_eval(q: &PrimeModulus, coeffs: &[i64], t: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| q.add(q.mul(acc, t), q.reduce(c)))
}

/// One pair of distinct primes in the almost-prime survey.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlmostPrimeRow {
    pub p: u64,
    pub q: u64,
    /// `Kl₂(p̄²; q)`.
    pub kl_q: f64,
    /// `Kl₂(q̄²; p)`.
    pub kl_p: f64,
    /// `Kl₂(1; pq)` by direct summation.
    pub kl_pq: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlmostPrimeSurvey {
    pub rows: Vec<AlmostPrimeRow>,
    /// Fraction of pairs with `|Kl₂(p̄²;q)| ≥ 0.4`.
    pub fraction_large_factor: f64,
    /// Sato–Tate prediction `μ_ST{|2cosθ| ≥ 0.4}`.
    pub predicted_large_factor: f64,
    /// Fraction with `|Kl₂(1;pq)| ≥ 0.16`.
    pub fraction_large_product: f64,
    pub positive: usize,
    pub negative: usize,
    /// Sign changes of `Kl₂(1;pq)` along the rows.
    pub sign_changes: usize,
    /// `max | |Kl₂(1;pq)| − |Kl₂(p̄²;q)|·|Kl₂(q̄²;p)| |`.
    pub max_multiplicativity_error: f64,
}

fn kl2_at(q: u64, other: u64) -> f64 {
    let inv = crate::arith::modular::inv_mod(other % q, q).expect("distinct primes");
    kl2_direct(q, mul_mod(inv, inv, q)).re
}

/// Survey over ordered pairs `p ∈ [p_lo, p_hi]`, `q ∈ [q_lo, q_hi]` of distinct odd primes.
pub fn almost_prime_survey(
    p_range: (u64, u64),
    q_range: (u64, u64),
    tables: &ArithmeticTables,
) -> Result<AlmostPrimeSurvey> {
    let hi = p_range.1.max(q_range.1);
    if hi > tables.limit() {
        return Err(Error::Capacity(format!(
            "prime range up to {hi} exceeds sieve limit {}",
            tables.limit()
        )));
    }
    let ps: Vec<u64> = primes_in_range(p_range.0.max(3), p_range.1);
    let qs: Vec<u64> = primes_in_range(q_range.0.max(3), q_range.1);
    let pairs: Vec<(u64, u64)> = ps
        .iter()
        .flat_map(|&p| qs.iter().filter(move |&&q| q != p).map(move |&q| (p, q)))
        .collect();
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    let rows: Vec<AlmostPrimeRow> = pairs
        .par_iter()
        .map(|&(p, q)| AlmostPrimeRow {
            p,
            q,
            kl_q: kl2_at(q, p),
            kl_p: kl2_at(p, q),
            kl_pq: kl2_direct(p * q, 1).re,
        })
        .collect();
    let n = rows.len() as f64;
    let fraction_large_factor = rows.iter().filter(|r| r.kl_q.abs() >= 0.4).count() as f64 / n;
    let fraction_large_product = rows.iter().filter(|r| r.kl_pq.abs() >= 0.16).count() as f64 / n;
    let positive = rows.iter().filter(|r| r.kl_pq > 0.0).count();
    let negative = rows.iter().filter(|r| r.kl_pq < 0.0).count();
    let signs: Vec<bool> = rows.iter().filter(|r| r.kl_pq != 0.0).map(|r| r.kl_pq > 0.0).collect();
    let sign_changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let max_multiplicativity_error = rows
        .iter()
        .map(|r| (r.kl_pq.abs() - r.kl_q.abs() * r.kl_p.abs()).abs())
        .fold(0.0, f64::max);
    Ok(AlmostPrimeSurvey {
        rows,
        fraction_large_factor,
        predicted_large_factor: SpectralMeasure::SatoTate.tail_probability(0.4),
        fraction_large_product,
        positive,
        negative,
        sign_changes,
        max_multiplicativity_error,
    })
}

/// One prime in the horizontal survey.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HorizontalRow {
    pub q: u64,
    pub kl2: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HorizontalSurvey {
    pub rows: Vec<HorizontalRow>,
    pub sample: AngleSample,
    pub ks_sato_tate: Option<f64>,
    pub status: &'static str,
}

/// Largest `X` for the horizontal survey.
pub const HORIZONTAL_MAX: u64 = 1_000_000;

/// `θ_{q,a}` for every odd prime `q ≤ X` not dividing `a`.
pub fn horizontal_survey(x: u64, a: u64) -> Result<HorizontalSurvey> {
    if x > HORIZONTAL_MAX {
        return Err(Error::Capacity(format!("horizontal survey limited to X ≤ {HORIZONTAL_MAX}")));
    }
    let primes: Vec<u64> = primes_in_range(3, x).into_iter().filter(|q| a % q != 0).collect();
    let rows: Vec<HorizontalRow> = primes
        .par_iter()
        .map(|&q| {
            let kl2 = kl2_direct(q, a % q).re;
            HorizontalRow {
                q,
                kl2,
                theta: (kl2 / 2.0).clamp(-1.0, 1.0).acos(),
            }
        })
        .collect();
    let sample = AngleSample::new(
        rows.iter().map(|r| r.theta).collect(),
        Provenance::new("kl2_horizontal", format!("3..={x}")).param("a", a),
    )?;
    let ks_sato_tate = if sample.is_empty() {
        None
    } else {
        Some(ks_distance(&sample, SpectralMeasure::SatoTate)?)
    };
    Ok(HorizontalSurvey {
        rows,
        sample,
        ks_sato_tate,
        status: "conjectural - report only",
    })
}
