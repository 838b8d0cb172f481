use std::sync::Arc;

use num_complex::Complex64;

use super::dft::{DftPlan, Direction};
use crate::arith::PrimeModulus;
use crate::error::Result;
use crate::phase::ZERO;
use crate::tracefn::{FamilyMeta, TraceFunction};

/// `K̂(y) = q^{-1/2} Σ_x K(x) e_q(sign·xy)`.
pub fn fourier(k: &TraceFunction, sign: i32) -> Result<TraceFunction> {
    let q = k.prime()?;
    let dir = Direction::from_sign(sign)?;
    let values = fourier_values(k.values(), dir)?;
    let meta = FamilyMeta::new(format!("fourier{}({})", if sign > 0 { "+" } else { "-" }, k.family()));
    TraceFunction::over_prime(q, values, meta)
}

pub(crate) fn fourier_values(values: &[Complex64], dir: Direction) -> Result<Vec<Complex64>> {
    let s = 1.0 / (values.len() as f64).sqrt();
    let mut out = DftPlan::new(values.len())?.apply(values, dir);
    out.iter_mut().for_each(|v| *v *= s);
    Ok(out)
}

/// `Ǩ(n) = q^{-1/2} Σ_{h≠0} F⁺K(h) e_q(h̄ n)`.
pub fn voronoi_transform(k: &TraceFunction) -> Result<TraceFunction> {
    let q: &Arc<PrimeModulus> = k.prime()?;
    let plus = fourier_values(k.values(), Direction::Plus)?;
    let mut inverted = vec![ZERO; plus.len()];
    for u in 1..q.q() {
        let h = q.inv(u).expect("unit");
        inverted[u as usize] = plus[h as usize];
    }
    let values = fourier_values(&inverted, Direction::Plus)?;
    TraceFunction::over_prime(q, values, FamilyMeta::new(format!("voronoi({})", k.family())))
}
