use num_complex::Complex64;

use crate::phase::turns;

/// Quadrature nodes used for `V̂`.
pub const BUMP_NODES: usize = 4096;
/// Nodes between exact phase evaluations in the quadrature.
const PHASE_RESEED: usize = 64;

/// The bump `V(x) = exp(−1/((x−1)(2−x)))` on `(1, 2)`, zero elsewhere, with its
/// Fourier transform `V̂(t) = ∫ V(x) e(xt) dx`.
#[derive(Debug, Clone)]
pub struct SmoothBump {
    nodes: Vec<(f64, f64)>,
    h: f64,
}

impl Default for SmoothBump {
    fn default() -> Self {
        Self::new()
    }
}

impl SmoothBump {
    pub fn new() -> Self {
        let h = 1.0 / BUMP_NODES as f64;
        let nodes = (1..BUMP_NODES)
            .map(|i| {
                let x = 1.0 + i as f64 * h;
                (x, Self::eval(x))
            })
            .collect();
        Self { nodes, h }
    }

    #[inline]
    pub fn eval(x: f64) -> f64 {
        if x <= 1.0 || x >= 2.0 {
            0.0
        } else {
            (-1.0 / ((x - 1.0) * (2.0 - x))).exp()
        }
    }

    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        Self::eval(x)
    }

    /// Support of `V`.
    pub fn support(&self) -> (f64, f64) {
        (1.0, 2.0)
    }

    /// `∫ V(x) e(xt) dx` by the trapezoid rule, which converges spectrally
    /// since every derivative of `V` vanishes at the endpoints.
    pub fn fourier(&self, t: f64) -> Complex64 {
        let step = turns(self.h * t);
        let mut s = Complex64::new(0.0, 0.0);
        for block in self.nodes.chunks(PHASE_RESEED) {
            let mut e = turns(block[0].0 * t);
            for &(_, v) in block {
                s += e * v;
                e *= step;
            }
        }
        s * self.h
    }

    pub fn integral(&self) -> f64 {
        self.nodes.iter().map(|&(_, v)| v).sum::<f64>() * self.h
    }
}
