use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use super::measure::SpectralMeasure;
use crate::error::{Error, Result};
use crate::tracefn::TraceFunction;

/// Slack allowed beyond `|K| ≤ 2` before angle extraction rejects a value.
pub const ANGLE_TOL: f64 = 1e-6;

/// Where a sample came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub family: String,
    pub modulus: String,
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(family: impl Into<String>, modulus: impl ToString) -> Self {
        Self {
            family: family.into(),
            modulus: modulus.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// Angles in `[0, π]`, or in `[0, 2π)` for circle samples.
#[derive(Debug, Clone, Serialize)]
pub struct AngleSample {
    pub angles: Vec<f64>,
    pub circle: bool,
    pub provenance: Provenance,
}

impl AngleSample {
    pub fn new(angles: Vec<f64>, provenance: Provenance) -> Result<Self> {
        Self::build(angles, false, provenance)
    }

    pub fn on_circle(angles: Vec<f64>, provenance: Provenance) -> Result<Self> {
        Self::build(angles, true, provenance)
    }

    fn build(angles: Vec<f64>, circle: bool, provenance: Provenance) -> Result<Self> {
        let hi = if circle { 2.0 * PI } else { PI };
        if let Some((i, &t)) = angles
            .iter()
            .enumerate()
            .find(|(_, &t)| !(-1e-12..=hi + 1e-12).contains(&t))
        {
            return Err(Error::DomainViolation {
                x: i as u64,
                reason: format!("angle {t} outside [0, {hi}]"),
            });
        }
        Ok(Self {
            angles,
            circle,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// `mean (2cosθ)^{2l}`.
    pub fn moment(&self, l: u32) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptySample);
        }
        let s: f64 = self
            .angles
            .iter()
            .map(|t| (2.0 * t.cos()).powi(2 * l as i32))
            .sum();
        Ok(s / self.len() as f64)
    }
}

/// Points of `F_q` whose values are turned into angles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    All,
    Units,
    Points(Vec<u64>),
}

impl Domain {
    pub fn points(&self, q: u64) -> Vec<u64> {
        match self {
            Domain::All => (0..q).collect(),
            Domain::Units => (1..q).collect(),
            Domain::Points(p) => p.clone(),
        }
    }
}

/// `θ = arccos(clamp(Re K / 2))`.
pub fn angle_of(x: u64, v: num_complex::Complex64) -> Result<f64> {
    if v.im.abs() > ANGLE_TOL {
        return Err(Error::DomainViolation {
            x,
            reason: format!("value {v} is not real"),
        });
    }
    if v.norm() > 2.0 + ANGLE_TOL {
        return Err(Error::DomainViolation {
            x,
            reason: format!("|K| = {} exceeds 2", v.norm()),
        });
    }
    Ok((v.re / 2.0).clamp(-1.0, 1.0).acos())
}

pub fn extract_angles(k: &TraceFunction, domain: &Domain) -> Result<AngleSample> {
    let angles = domain
        .points(k.q())
        .into_iter()
        .map(|x| angle_of(x, k.get(x)))
        .collect::<Result<Vec<f64>>>()?;
    AngleSample::new(angles, Provenance::new(k.family(), k.q()))
}

/// `sup |F_emp − F_μ|` over the sample.
pub fn ks_distance(sample: &AngleSample, mu: SpectralMeasure) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut s = sample.angles.clone();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    Ok(s.iter()
        .enumerate()
        .map(|(i, &t)| {
            let f = mu.cdf(t);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max))
}

/// `#domain⁻¹ Σ_x U_k(θ_x)` with `U_k(θ) = sin((k+1)θ)/sinθ`.
pub fn weyl_sym_power(k: &TraceFunction, order: u32, domain: &Domain) -> Result<f64> {
    let pts = domain.points(k.q());
    if pts.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut total = 0.0;
    for x in &pts {
        let v = k.get(*x);
        angle_of(*x, v)?;
        total += chebyshev_u(order, v.re.clamp(-2.0, 2.0));
    }
    Ok(total / pts.len() as f64)
}

/// `U_k` at `t = 2cosθ` via `U_{n+1} = t U_n − U_{n−1}`.
pub fn chebyshev_u(order: u32, t: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..order {
        let next = t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_prime_modulus;
    use crate::tracefn::from_values;
    use crate::transforms::kloosterman;
    use num_complex::Complex64;
    use std::sync::Arc;

    #[test]
    fn angle_examples() {
        assert_eq!(angle_of(0, Complex64::new(2.0, 0.0)).unwrap(), 0.0);
        assert!((angle_of(0, Complex64::new(0.0, 0.0)).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((angle_of(0, Complex64::new(2.0 + 1e-9, 0.0)).unwrap()).abs() < 1e-12);
        assert!(matches!(
            angle_of(3, Complex64::new(2.1, 0.0)),
            Err(Error::DomainViolation { x: 3, .. })
        ));
        assert!(angle_of(0, Complex64::new(1.0, 1e-3)).is_err());
        let kl = kloosterman(&Arc::new(make_prime_modulus(5).unwrap())).unwrap();
        let s = extract_angles(&kl, &Domain::Points(vec![1])).unwrap();
        assert!((s.angles[0] - 1.485_28).abs() < 1e-5);
    }

    #[test]
    fn ks_examples() {
        let one = AngleSample::new(vec![PI / 2.0], Provenance::default()).unwrap();
        assert!((ks_distance(&one, SpectralMeasure::UniformInterval).unwrap() - 0.5).abs() < 1e-15);
        let empty = AngleSample::new(vec![], Provenance::default()).unwrap();
        assert!(matches!(
            ks_distance(&empty, SpectralMeasure::SatoTate),
            Err(Error::EmptySample)
        ));
        let st = SpectralMeasure::SatoTate;
        let draw = AngleSample::new(st.sample(100_000, 1), Provenance::default()).unwrap();
        assert!(ks_distance(&draw, st).unwrap() <= 0.01);
    }

    #[test]
    fn chebyshev_matches_sines() {
        for &t in &[0.3, 1.1, 2.9] {
            for k in 0..8u32 {
                let want = ((k + 1) as f64 * t).sin() / t.sin();
                assert!((chebyshev_u(k, 2.0 * t.cos()) - want).abs() < 1e-12);
            }
        }
        assert_eq!(chebyshev_u(5, 2.0), 6.0);
    }

    #[test]
    fn weyl_and_moments_consistent() {
        let q = Arc::new(make_prime_modulus(1009).unwrap());
        let kl = kloosterman(&q).unwrap();
        assert_eq!(weyl_sym_power(&kl, 0, &Domain::Units).unwrap(), 1.0);
        let s = extract_angles(&kl, &Domain::Units).unwrap();
        let m2 = s.moment(1).unwrap();
        let u2 = weyl_sym_power(&kl, 2, &Domain::Units).unwrap();
        assert!((m2 - (u2 + 1.0)).abs() < 1e-9);
        for x in 1..1009u64 {
            let t = s.angles[(x - 1) as usize];
            assert!((2.0 * t.cos() - kl.get(x).re).abs() < 1e-9);
        }
        let bad = from_values(&q, "bad", vec![Complex64::new(3.0, 0.0); 1009]).unwrap();
        assert!(weyl_sym_power(&bad, 1, &Domain::Units).is_err());
    }
}
