use super::modular::{inv_mod, mul_mod};
use crate::error::{Error, Result};

/// Outcome of evaluating a rational function at a point of `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RationalValue {
    Value(u64),
    Pole,
}

/// A rational function `numerator / denominator` over `F_q`, stored in lowest terms
/// with a monic denominator. Coefficients are listed from the constant term upward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunctionModQ {
    q: u64,
    numerator: Vec<u64>,
    denominator: Vec<u64>,
}

fn trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn reduce_coeffs(coeffs: &[i64], q: u64) -> Vec<u64> {
    trim(coeffs.iter().map(|&c| super::modular::reduce_i64(c, q)).collect())
}

fn degree(p: &[u64]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

/// Polynomial division with remainder over `F_q`; `b` must be nonzero.
fn poly_divrem(a: &[u64], b: &[u64], q: u64) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod(b[db], q).expect("leading coefficient is a unit");
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let mut quot = vec![0u64; r.len() - db];
    for i in (0..quot.len()).rev() {
        let coef = mul_mod(r[i + db], lead_inv, q);
        quot[i] = coef;
        if coef == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let sub = mul_mod(coef, bj, q);
            r[i + j] = (r[i + j] + q - sub) % q;
        }
    }
    (trim(quot), trim(r))
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b, q);
        a = b;
        b = r;
    }
    a
}

fn make_monic(p: &[u64], q: u64) -> (Vec<u64>, u64) {
    let lead = *p.last().expect("nonzero polynomial");
    let inv = inv_mod(lead, q).expect("unit leading coefficient");
    (p.iter().map(|&c| mul_mod(c, inv, q)).collect(), lead)
}

fn derivative(p: &[u64], q: u64) -> Vec<u64> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % q, q))
            .collect(),
    )
}

fn horner(p: &[u64], x: u64, q: u64) -> u64 {
    p.iter().rev().fold(0u64, |acc, &c| (mul_mod(acc, x, q) + c) % q)
}

impl RationalFunctionModQ {
    /// Builds `num/den` reduced modulo the prime `q` and cancelled to lowest terms.
    pub fn new(q: u64, numerator: &[i64], denominator: &[i64]) -> Result<Self> {
        let num = reduce_coeffs(numerator, q);
        let den = reduce_coeffs(denominator, q);
        if den.is_empty() {
            return Err(Error::InvalidArgument(
                "denominator vanishes identically mod q".into(),
            ));
        }
        if num.is_empty() {
            return Ok(Self {
                q,
                numerator: Vec::new(),
                denominator: vec![1],
            });
        }
        let g = poly_gcd(&num, &den, q);
        let (num, _) = poly_divrem(&num, &g, q);
        let (den, _) = poly_divrem(&den, &g, q);
        let (den, lead) = make_monic(&den, q);
        let lead_inv = inv_mod(lead, q).expect("unit");
        let num = num.iter().map(|&c| mul_mod(c, lead_inv, q)).collect();
        Ok(Self {
            q,
            numerator: num,
            denominator: den,
        })
    }

    pub fn polynomial(q: u64, coeffs: &[i64]) -> Self {
        Self::new(q, coeffs, &[1]).expect("constant denominator")
    }

    pub fn constant(q: u64, c: i64) -> Self {
        Self::polynomial(q, &[c])
    }

    /// `f(x) = x`.
    pub fn identity(q: u64) -> Self {
        Self::polynomial(q, &[0, 1])
    }

    /// `f(x) = 1/x`.
    pub fn reciprocal(q: u64) -> Self {
        Self::new(q, &[1], &[0, 1]).expect("nonzero denominator")
    }

    /// `f(x) = 1/x + x`.
    pub fn kloosterman_phase(q: u64) -> Self {
        Self::new(q, &[1, 0, 1], &[0, 1]).expect("nonzero denominator")
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn numerator(&self) -> &[u64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[u64] {
        &self.denominator
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.is_polynomial() && self.numerator.len() <= 1
    }

    pub fn eval(&self, x: u64) -> RationalValue {
        let q = self.q;
        let x = x % q;
        let d = horner(&self.denominator, x, q);
        if d == 0 {
            return RationalValue::Pole;
        }
        let n = horner(&self.numerator, x, q);
        RationalValue::Value(mul_mod(n, inv_mod(d, q).expect("nonzero"), q))
    }

    /// Number of distinct finite poles over the algebraic closure (degree of the radical of the denominator).
    pub fn distinct_finite_poles(&self) -> usize {
        let den = &self.denominator;
        if den.len() <= 1 {
            return 0;
        }
        let g = poly_gcd(den, &derivative(den, self.q), self.q);
        let (rad, _) = poly_divrem(den, &g, self.q);
        degree(&rad).unwrap_or(0)
    }

    /// Total pole multiplicity on the projective line, including the pole at infinity.
    pub fn total_pole_multiplicity(&self) -> usize {
        let dn = degree(&self.numerator).unwrap_or(0);
        let dd = degree(&self.denominator).unwrap_or(0);
        dd + dn.saturating_sub(dd)
    }

    pub fn has_pole_at_infinity(&self) -> bool {
        degree(&self.numerator).unwrap_or(0) > degree(&self.denominator).unwrap_or(0)
    }
}
