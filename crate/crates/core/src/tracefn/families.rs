//! Concrete trace-function families evaluated pointwise over `F_q`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::function::{FamilyMeta, TraceFunction};
use crate::arith::{PrimeModulus, RationalFunctionModQ, RationalValue};
use crate::error::{Error, Result};
use crate::phase::{unit_root, ONE, ZERO};

/// Work ceiling for the brute-force hyper-Kloosterman oracle.
pub const DIRECT_KLOOSTERMAN_BUDGET: f64 = 1e9;

fn check_field(q: &PrimeModulus, f: &RationalFunctionModQ) -> Result<()> {
    if f.modulus() != q.q() {
        return Err(Error::ModulusMismatch {
            left: q.q(),
            right: f.modulus(),
        });
    }
    Ok(())
}

/// `x ↦ e_q(f(x))`, extended by zero at the poles of `f`.
pub fn additive_phase(q: &Arc<PrimeModulus>, f: &RationalFunctionModQ) -> Result<TraceFunction> {
    check_field(q, f)?;
    let values: Vec<Complex64> = (0..q.q())
        .into_par_iter()
        .map(|x| match f.eval(x) {
            RationalValue::Value(v) => q.e_q(v),
            RationalValue::Pole => ZERO,
        })
        .collect();
    let conductor = if f.is_constant() {
        1
    } else {
        let poles = f.distinct_finite_poles() + usize::from(f.has_pole_at_infinity());
        1 + poles + f.total_pole_multiplicity()
    };
    let meta = FamilyMeta::new("additive_phase")
        .param("numerator", format!("{:?}", f.numerator()))
        .param("denominator", format!("{:?}", f.denominator()))
        .real(f.is_constant() && matches!(f.eval(0), RationalValue::Value(0)))
        .sup_norm(1.0)
        .conductor(conductor as u32)
        .describe("e_q(f(x)), zero at poles");
    TraceFunction::over_prime(q, values, meta)
}

/// `x ↦ χ_m(f(x))` for the multiplicative character of index `m`, zero where `f(x)` is `0` or a pole.
pub fn mult_phase(
    q: &Arc<PrimeModulus>,
    m: u64,
    f: &RationalFunctionModQ,
) -> Result<TraceFunction> {
    check_field(q, f)?;
    if m >= q.order() {
        return Err(Error::InvalidArgument(format!(
            "character index {m} outside [0, {})",
            q.order()
        )));
    }
    let values: Vec<Complex64> = (0..q.q())
        .into_par_iter()
        .map(|x| match f.eval(x) {
            RationalValue::Value(v) => q.character(m, v),
            RationalValue::Pole => ZERO,
        })
        .collect();
    let real = m == 0 || 2 * m == q.order();
    let conductor = if m == 0 {
        1
    } else {
        let zeros = f.numerator().len().saturating_sub(1);
        1 + zeros + f.distinct_finite_poles() + usize::from(f.has_pole_at_infinity())
    };
    let meta = FamilyMeta::new("mult_phase")
        .param("m", m)
        .param("numerator", format!("{:?}", f.numerator()))
        .param("denominator", format!("{:?}", f.denominator()))
        .real(real)
        .sup_norm(1.0)
        .conductor(conductor as u32)
        .describe("chi_m(f(x)), zero at zeros and poles");
    TraceFunction::over_prime(q, values, meta)
}

/// The additive character `x ↦ e_q(x)`.
pub fn additive_character(q: &Arc<PrimeModulus>) -> TraceFunction {
    additive_phase(q, &RationalFunctionModQ::identity(q.q())).expect("same field")
}

/// The multiplicative character `χ_m` as a trace function.
pub fn character(q: &Arc<PrimeModulus>, m: u64) -> Result<TraceFunction> {
    mult_phase(q, m, &RationalFunctionModQ::identity(q.q()))
}

/// The Legendre symbol as a trace function.
pub fn legendre_character(q: &Arc<PrimeModulus>) -> TraceFunction {
    mult_phase(q, q.order() / 2, &RationalFunctionModQ::identity(q.q())).expect("same field")
}

/// Normalized hyper-Kloosterman sum by direct enumeration of `x_1⋯x_k = a`.
///
/// Costs `O(q^(k-1))`; intended as an oracle for the transform pipeline.
pub fn kloosterman_direct(q: &PrimeModulus, k: u32, a: u64) -> Result<Complex64> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 2")));
    }
    let p = q.q();
    let a = a % p;
    if a == 0 {
        return Err(Error::InvalidArgument("a must be a unit mod q".into()));
    }
    if (p as f64).powi(k as i32 - 1) > DIRECT_KLOOSTERMAN_BUDGET {
        return Err(Error::Capacity(format!(
            "direct Kl_{k} at q={p} needs q^(k-1) > {DIRECT_KLOOSTERMAN_BUDGET:e} terms"
        )));
    }
    let counts = enumerate_kloosterman(q, k as usize - 1, a);
    let total: Complex64 = counts
        .iter()
        .enumerate()
        .map(|(j, &c)| unit_root(j as u64, p) * c as f64)
        .sum();
    Ok(total / (p as f64).powf((k as f64 - 1.0) / 2.0))
}

/// Histogram of `x_1+⋯+x_k mod q` over `x_1⋯x_k = a`, enumerating the first `free` coordinates.
fn enumerate_kloosterman(q: &PrimeModulus, free: usize, a: u64) -> Vec<u64> {
    let p = q.q() as usize;
    let n = p - 1;
    let ja = q.dlog(a).expect("unit") as usize;
    let first: Vec<Vec<u64>> = (1..p)
        .into_par_iter()
        .map(|x1| {
            let mut counts = vec![0u64; p];
            let j1 = q.dlog(x1 as u64).expect("unit") as usize;
            descend(q, free - 1, x1, j1, ja, n, &mut counts);
            counts
        })
        .collect();
    let mut counts = vec![0u64; p];
    for c in first {
        for (acc, v) in counts.iter_mut().zip(c) {
            *acc += v;
        }
    }
    counts
}

/// Adds the remaining `left` free coordinates to a partial tuple with sum `sum` and product `g^jp`.
fn descend(q: &PrimeModulus, left: usize, sum: usize, jp: usize, ja: usize, n: usize, counts: &mut [u64]) {
    let p = n + 1;
    let powers = q.powers();
    if left == 0 {
        let last = powers[(ja + n - jp) % n] as usize;
        counts[(sum + last) % p] += 1;
        return;
    }
    for x in 1..p {
        let jx = q.dlog(x as u64).expect("unit") as usize;
        descend(q, left - 1, (sum + x) % p, (jp + jx) % n, ja, n, counts);
    }
}

/// Normalized Salié sum `q^(-1/2) Σ_{xy=a} (x/q) e_q(x+y)`.
///
/// Real when `q ≡ 1 (mod 4)` and purely imaginary when `q ≡ 3 (mod 4)`.
pub fn salie(q: &PrimeModulus, a: u64) -> Result<Complex64> {
    let p = q.q();
    let a = a % p;
    if a == 0 {
        return Err(Error::InvalidArgument("a must be a unit mod q".into()));
    }
    let total: Complex64 = (1..p)
        .map(|x| {
            let y = q.mul(a, q.inv(x).expect("unit"));
            q.e_q(x + y) * q.legendre(x) as f64
        })
        .sum();
    Ok(total / (p as f64).sqrt())
}

/// Unit `ε̄_q` that rotates Salié sums onto the real line: `1` if `q ≡ 1 (mod 4)`, `-i` otherwise.
pub fn salie_rotation(q: u64) -> Complex64 {
    if q % 4 == 1 {
        ONE
    } else {
        Complex64::new(0.0, -1.0)
    }
}

/// Salié sums for every `a`, rotated to be real, zero at `a = 0`.
pub fn salie_family(q: &Arc<PrimeModulus>) -> Result<TraceFunction> {
    let rot = salie_rotation(q.q());
    let mut values: Vec<Complex64> = (0..q.q())
        .into_par_iter()
        .map(|a| {
            if a == 0 {
                ZERO
            } else {
                salie(q, a).expect("unit") * rot
            }
        })
        .collect();
    for v in values.iter_mut() {
        v.im = 0.0;
    }
    let meta = FamilyMeta::new("salie")
        .real(true)
        .sup_norm(2.0)
        .describe("Salie sums rotated by the conjugate quadratic Gauss sum sign");
    TraceFunction::over_prime(q, values, meta)
}

/// `a_q(E)` for `y² = x³ + a x + b`, i.e. `-Σ_x ((x³+ax+b)/q)`; `None` on a singular curve.
pub fn elliptic_trace(q: &PrimeModulus, a: u64, b: u64) -> Option<i64> {
    let p = q.q();
    let (a, b) = (a % p, b % p);
    let disc = (4 * q.mul(q.mul(a, a), a) + 27 * q.mul(b, b)) % p;
    if disc == 0 {
        return None;
    }
    let mut s = 0i64;
    for x in 0..p {
        let v = (q.mul(q.mul(x, x), x) + q.mul(a, x) + b) % p;
        s += q.legendre(v) as i64;
    }
    Some(-s)
}

/// `t ↦ a_q(E_t)/√q` for the family `y² = x³ + a(t)x + b(t)`, zero where the discriminant vanishes.
pub fn birch_family(
    q: &Arc<PrimeModulus>,
    a_poly: &RationalFunctionModQ,
    b_poly: &RationalFunctionModQ,
) -> Result<TraceFunction> {
    check_field(q, a_poly)?;
    check_field(q, b_poly)?;
    if !a_poly.is_polynomial() || !b_poly.is_polynomial() {
        return Err(Error::InvalidArgument(
            "elliptic family coefficients must be polynomials".into(),
        ));
    }
    let scale = 1.0 / (q.q() as f64).sqrt();
    let values: Vec<Complex64> = (0..q.q())
        .into_par_iter()
        .map(|t| {
            let (RationalValue::Value(a), RationalValue::Value(b)) = (a_poly.eval(t), b_poly.eval(t))
            else {
                unreachable!("polynomials have no finite poles")
            };
            match elliptic_trace(q, a, b) {
                Some(tr) => Complex64::new(tr as f64 * scale, 0.0),
                None => ZERO,
            }
        })
        .collect();
    let meta = FamilyMeta::new("birch")
        .param("a", format!("{:?}", a_poly.numerator()))
        .param("b", format!("{:?}", b_poly.numerator()))
        .real(true)
        .sup_norm(2.0)
        .describe("normalized Frobenius traces of y^2 = x^3 + a(t)x + b(t)");
    TraceFunction::over_prime(q, values, meta)
}
