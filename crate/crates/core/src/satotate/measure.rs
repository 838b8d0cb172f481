use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Reference laws for angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMeasure {
    /// `(2/π) sin²θ dθ` on `[0, π]`.
    SatoTate,
    /// `dθ/π` on `[0, π]`.
    UniformInterval,
    /// `dθ/2π` on `[0, 2π)`.
    UniformCircle,
}

/// Trapezoid nodes for moment quadrature; exact for trigonometric polynomials of degree below twice this.
const MOMENT_NODES: usize = 512;

impl SpectralMeasure {
    pub fn tag(self) -> &'static str {
        match self {
            SpectralMeasure::SatoTate => "sato_tate",
            SpectralMeasure::UniformInterval => "uniform_interval",
            SpectralMeasure::UniformCircle => "uniform_circle",
        }
    }

    /// Upper end of the angle range.
    pub fn upper(self) -> f64 {
        match self {
            SpectralMeasure::UniformCircle => 2.0 * PI,
            _ => PI,
        }
    }

    pub fn density(self, theta: f64) -> f64 {
        if theta < 0.0 || theta > self.upper() {
            return 0.0;
        }
        match self {
            SpectralMeasure::SatoTate => 2.0 / PI * theta.sin().powi(2),
            SpectralMeasure::UniformInterval => 1.0 / PI,
            SpectralMeasure::UniformCircle => 0.5 / PI,
        }
    }

    pub fn cdf(self, theta: f64) -> f64 {
        let t = theta.clamp(0.0, self.upper());
        match self {
            SpectralMeasure::SatoTate => ((t - (2.0 * t).sin() / 2.0) / PI).clamp(0.0, 1.0),
            SpectralMeasure::UniformInterval => t / PI,
            SpectralMeasure::UniformCircle => t / (2.0 * PI),
        }
    }

    /// `∫ (2cosθ)^{2l} dμ` by the periodic trapezoid rule.
    pub fn moment(self, l: u32) -> f64 {
        let n = MOMENT_NODES;
        let h = self.upper() / n as f64;
        let f = |t: f64| (2.0 * t.cos()).powi(2 * l as i32) * self.density(t);
        let inner: f64 = (1..n).map(|i| f(i as f64 * h)).sum();
        h * (inner + 0.5 * (f(0.0) + f(self.upper())))
    }

    /// `θ` with `cdf(θ) = u`.
    pub fn inverse_cdf(self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            SpectralMeasure::UniformInterval => u * PI,
            SpectralMeasure::UniformCircle => u * 2.0 * PI,
            SpectralMeasure::SatoTate => {
                let (mut lo, mut hi) = (0.0, PI);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if self.cdf(mid) < u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }

    /// Seeded inverse-cdf sample.
    pub fn sample(self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.inverse_cdf(rng.gen::<f64>())).collect()
    }

    /// `μ{θ : |2cosθ| ≥ t}`.
    pub fn tail_probability(self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        if t > 2.0 {
            return 0.0;
        }
        let theta0 = (t / 2.0).acos();
        match self {
            SpectralMeasure::UniformCircle => {
                2.0 * (self.cdf(theta0) + self.cdf(PI) - self.cdf(PI - theta0))
            }
            _ => self.cdf(theta0) + 1.0 - self.cdf(PI - theta0),
        }
    }
}

/// Catalan numbers `C_0..C_5`.
pub const CATALAN: [f64; 6] = [1.0, 1.0, 2.0, 5.0, 14.0, 42.0];
/// Central binomials `binom(2l, l)` for `l ≤ 5`.
pub const CENTRAL_BINOMIAL: [f64; 6] = [1.0, 2.0, 6.0, 20.0, 70.0, 252.0];

/// Angles `arccos(Π cos θ_i)` with `θ_i` independent Sato–Tate draws.
pub fn sato_tate_order_k_sample(k: u32, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let st = SpectralMeasure::SatoTate;
    (0..n)
        .map(|_| {
            let c: f64 = (0..k).map(|_| st.inverse_cdf(rng.gen::<f64>()).cos()).product();
            c.clamp(-1.0, 1.0).acos()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn cdf_endpoints_and_monotone() {
        for m in [
            SpectralMeasure::SatoTate,
            SpectralMeasure::UniformInterval,
            SpectralMeasure::UniformCircle,
        ] {
            assert_eq!(m.cdf(0.0), 0.0);
            assert!((m.cdf(m.upper()) - 1.0).abs() < 1e-15);
            let mut prev = 0.0;
            for i in 0..=1000 {
                let c = m.cdf(m.upper() * i as f64 / 1000.0);
                assert!(c >= prev);
                prev = c;
            }
            let mass = simpson(|t| m.density(t), 0.0, m.upper(), 2000);
            assert!((mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn moments_are_catalan_and_central_binomial() {
        for l in 0..6u32 {
            let st = SpectralMeasure::SatoTate.moment(l);
            let un = SpectralMeasure::UniformInterval.moment(l);
            let ci = SpectralMeasure::UniformCircle.moment(l);
            assert!((st - CATALAN[l as usize]).abs() < 1e-12, "l={l}");
            assert!((un - CENTRAL_BINOMIAL[l as usize]).abs() < 1e-12);
            assert!((ci - CENTRAL_BINOMIAL[l as usize]).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_cdf_round_trip() {
        for u in [0.0, 0.1, 0.5, 0.77, 1.0] {
            let t = SpectralMeasure::SatoTate.inverse_cdf(u);
            assert!((SpectralMeasure::SatoTate.cdf(t) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn tail_probability_matches_quadrature() {
        let st = SpectralMeasure::SatoTate;
        let t = 0.4;
        let direct = simpson(
            |th| if (2.0 * th.cos()).abs() >= t { st.density(th) } else { 0.0 },
            0.0,
            PI,
            200_000,
        );
        assert!((st.tail_probability(t) - direct).abs() < 1e-4);
    }

    #[test]
    fn order_one_sampler_is_sato_tate() {
        let a = sato_tate_order_k_sample(1, 10, 3);
        let b = SpectralMeasure::SatoTate.sample(10, 3);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-7);
        }
    }
}
