use std::sync::Arc;

use num_complex::Complex64;

use super::function::{FamilyMeta, TraceFunction};
use crate::arith::modular::{inv_mod, mul_mod, reduce_i64};
use crate::arith::PrimeModulus;
use crate::error::{Error, Result};
use crate::phase::ZERO;

/// An element of `PGL_2(F_q)` acting by `x ↦ (ax+b)/(cx+d)`.
///
/// Stored with the first nonzero entry of `(a, b, c, d)` scaled to 1, so equal
/// group elements compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pgl2Element {
    q: u64,
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

impl Pgl2Element {
    pub fn new(q: u64, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let [a, b, c, d] = [a, b, c, d].map(|v| reduce_i64(v, q));
        let det = (mul_mod(a, d, q) + q - mul_mod(b, c, q)) % q;
        if det == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix [[{a},{b}],[{c},{d}]] is singular mod {q}"
            )));
        }
        let lead = [a, b, c, d].into_iter().find(|&v| v != 0).expect("det ≠ 0");
        let s = inv_mod(lead, q).expect("unit");
        Ok(Self {
            q,
            a: mul_mod(a, s, q),
            b: mul_mod(b, s, q),
            c: mul_mod(c, s, q),
            d: mul_mod(d, s, q),
        })
    }

    pub fn identity(q: u64) -> Self {
        Self::new(q, 1, 0, 0, 1).expect("invertible")
    }

    /// `x ↦ x + b`.
    pub fn translation(q: u64, b: i64) -> Self {
        Self::new(q, 1, b, 0, 1).expect("invertible")
    }

    /// `x ↦ a x` for a unit `a`.
    pub fn scaling(q: u64, a: i64) -> Result<Self> {
        Self::new(q, a, 0, 0, 1)
    }

    /// `x ↦ 1/x`.
    pub fn inversion(q: u64) -> Self {
        Self::new(q, 0, 1, 1, 0).expect("invertible")
    }

    pub fn entries(&self) -> [u64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Image of `x`; `None` when it is the point at infinity.
    pub fn apply(&self, x: u64) -> Option<u64> {
        let q = self.q;
        let x = x % q;
        let den = (mul_mod(self.c, x, q) + self.d) % q;
        if den == 0 {
            return None;
        }
        let num = (mul_mod(self.a, x, q) + self.b) % q;
        Some(mul_mod(num, inv_mod(den, q).expect("nonzero"), q))
    }

    /// Matrix product `self · other`, acting as `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "composing across moduli");
        let q = self.q as i64;
        let m = |x: u64, y: u64| mul_mod(x, y, self.q) as i64;
        Self::new(
            self.q,
            (m(self.a, other.a) + m(self.b, other.c)) % q,
            (m(self.a, other.b) + m(self.b, other.d)) % q,
            (m(self.c, other.a) + m(self.d, other.c)) % q,
            (m(self.c, other.b) + m(self.d, other.d)) % q,
        )
        .expect("product of invertible matrices")
    }
}

/// `x ↦ K(γ·x)`, with value zero where `γ·x = ∞`.
pub fn pullback(k: &TraceFunction, gamma: &Pgl2Element) -> Result<TraceFunction> {
    let q: &Arc<PrimeModulus> = k.prime()?;
    if gamma.modulus() != q.q() {
        return Err(Error::ModulusMismatch {
            left: q.q(),
            right: gamma.modulus(),
        });
    }
    let values: Vec<Complex64> = (0..q.q())
        .map(|x| gamma.apply(x).map_or(ZERO, |y| k.get(y)))
        .collect();
    let mut meta: FamilyMeta = k.meta().clone();
    meta.family = format!("pullback({})", meta.family);
    meta.params
        .insert("gamma".into(), format!("{:?}", gamma.entries()));
    TraceFunction::over_prime(q, values, meta)
}

/// `x ↦ K(a x)`.
pub fn multiplicative_shift(k: &TraceFunction, a: u64) -> Result<TraceFunction> {
    let gamma = Pgl2Element::scaling(k.q(), a as i64)?;
    pullback(k, &gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_prime_modulus, RationalFunctionModQ};
    use crate::tracefn::families::{additive_character, additive_phase};
    use proptest::prelude::*;

    fn field(q: u64) -> Arc<PrimeModulus> {
        Arc::new(make_prime_modulus(q).unwrap())
    }

    #[test]
    fn canonical_form() {
        let g = Pgl2Element::new(7, 2, 4, 0, 2).unwrap();
        assert_eq!(g, Pgl2Element::new(7, 1, 2, 0, 1).unwrap());
        assert_eq!(g.entries(), [1, 2, 0, 1]);
        assert!(Pgl2Element::new(7, 1, 2, 2, 4).is_err());
    }

    #[test]
    fn identity_and_translation() {
        let q = field(11);
        let k = additive_character(&q);
        let id = pullback(&k, &Pgl2Element::identity(11)).unwrap();
        assert_eq!(id.values(), k.values());
        let t = pullback(&k, &Pgl2Element::translation(11, 3)).unwrap();
        for x in 0..11 {
            assert_eq!(t.get(x), k.get(x + 3));
        }
    }

    #[test]
    fn inversion_gives_reciprocal_phase() {
        let q = field(13);
        let k = additive_character(&q);
        let inv = pullback(&k, &Pgl2Element::inversion(13)).unwrap();
        let direct = additive_phase(&q, &RationalFunctionModQ::reciprocal(13)).unwrap();
        assert_eq!(inv.get(0), ZERO);
        for x in 0..13 {
            assert!((inv.get(x) - direct.get(x)).norm() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn pullback_composes(e1 in prop::array::uniform4(0i64..17), e2 in prop::array::uniform4(0i64..17)) {
            let p = 17u64;
            let (Ok(g1), Ok(g2)) = (
                Pgl2Element::new(p, e1[0], e1[1], e1[2], e1[3]),
                Pgl2Element::new(p, e2[0], e2[1], e2[2], e2[3]),
            ) else { return Ok(()); };
            let q = field(p);
            let k = additive_phase(&q, &RationalFunctionModQ::kloosterman_phase(p)).unwrap();
            let twice = pullback(&pullback(&k, &g1).unwrap(), &g2).unwrap();
            let once = pullback(&k, &g1.compose(&g2)).unwrap();
            for x in 0..p {
                let Some(y) = g2.apply(x) else { continue };
                if g1.apply(y).is_none() { continue; }
                prop_assert!((twice.get(x) - once.get(x)).norm() < 1e-15);
            }
        }
    }
}
