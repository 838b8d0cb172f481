use num_complex::Complex64;
use std::f64::consts::PI;

/// `exp(2πi·j/n)`, evaluated on the half-turn nearest to zero so the argument stays small.
#[inline]
pub fn unit_root(j: u64, n: u64) -> Complex64 {
    let j = j % n;
    if 2 * j <= n {
        let t = 2.0 * PI * (j as f64) / (n as f64);
        Complex64::new(t.cos(), t.sin())
    } else {
        let t = 2.0 * PI * ((n - j) as f64) / (n as f64);
        Complex64::new(t.cos(), -t.sin())
    }
}

/// `exp(2πi·t)` for a real number of turns.
#[inline]
pub fn turns(t: f64) -> Complex64 {
    let t = t - t.round();
    let a = 2.0 * PI * t;
    Complex64::new(a.cos(), a.sin())
}

/// `exp(2πi·j/n)` for all `j < n`, re-anchored on exact values every 32 steps.
pub fn root_table(n: u64) -> Vec<Complex64> {
    let step = unit_root(1, n);
    let mut out = Vec::with_capacity(n as usize);
    let mut cur = Complex64::new(1.0, 0.0);
    for j in 0..n {
        if j % 32 == 0 {
            cur = unit_root(j, n);
        }
        out.push(cur);
        cur *= step;
    }
    out
}

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
