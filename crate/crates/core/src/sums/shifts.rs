use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::modular::gcd;
use crate::arith::PrimeModulus;
use crate::error::{Error, Result};
use crate::phase::unit_root;
use crate::tracefn::{kl2_direct, TraceFunction};

/// Shift vector `b = (b_1, …, b_{2l})` with entries in `[B, 2B)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftTuple {
    b: Vec<i64>,
    l: usize,
}

impl ShiftTuple {
    /// Entries must lie in `[lo, hi)`.
    pub fn in_box(b: Vec<i64>, lo: i64, hi: i64) -> Result<Self> {
        if b.is_empty() || b.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "shift tuple needs an even positive length, got {}",
                b.len()
            )));
        }
        if let Some(x) = b.iter().find(|&&x| x < lo || x >= hi) {
            return Err(Error::InvalidArgument(format!("shift {x} outside [{lo}, {hi})")));
        }
        let l = b.len() / 2;
        Ok(Self { b, l })
    }

    /// Entries in the dyadic box `[B, 2B)`.
    pub fn new(b: Vec<i64>, big_b: i64) -> Result<Self> {
        Self::in_box(b, big_b, 2 * big_b)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn entries(&self) -> &[i64] {
        &self.b
    }

    pub fn numerator(&self) -> &[i64] {
        &self.b[..self.l]
    }

    pub fn denominator(&self) -> &[i64] {
        &self.b[self.l..]
    }

    /// Every tuple of length `2l` with entries in `[lo, hi)`, in lexicographic order.
    pub fn enumerate_box(l: usize, lo: i64, hi: i64) -> Vec<ShiftTuple> {
        let width = (hi - lo).max(0) as usize;
        let count = width.pow(2 * l as u32);
        (0..count)
            .map(|mut idx| {
                let mut b = vec![0i64; 2 * l];
                for slot in b.iter_mut().rev() {
                    *slot = lo + (idx % width) as i64;
                    idx /= width;
                }
                ShiftTuple { b, l }
            })
            .collect()
    }

    fn reduced(&self, q: u64) -> Vec<u64> {
        self.b.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect()
    }

    /// Numerator and denominator agree as multisets mod `q`.
    pub fn is_diagonal(&self, q: u64) -> bool {
        let r = self.reduced(q);
        let mut top = r[..self.l].to_vec();
        let mut bottom = r[self.l..].to_vec();
        top.sort_unstable();
        bottom.sort_unstable();
        top == bottom
    }

    /// `Σ_i (b_i − b_{i+l})` mod `q`.
    pub fn shift_balance(&self, q: u64) -> u64 {
        let s: i64 = self.numerator().iter().sum::<i64>() - self.denominator().iter().sum::<i64>();
        s.rem_euclid(q as i64) as u64
    }
}

/// How `F_b = Π(X+b_i)/Π(X+b_{l+i})` behaves under a character of order `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TupleClass {
    /// `F_b ≡ 1`.
    Constant,
    /// `F_b` is a `k`-th power up to a constant.
    Power,
    Good,
}

impl TupleClass {
    pub fn is_bad(self) -> bool {
        self != TupleClass::Good
    }
}

/// Multiplicities `e_c` of the root `−c` in `F_b`, over distinct `c` mod `q`.
fn exponents(b: &ShiftTuple, q: u64) -> Vec<(u64, i64)> {
    let r = b.reduced(q);
    let mut e: Vec<(u64, i64)> = Vec::new();
    for (i, &c) in r.iter().enumerate() {
        let sign = if i < b.l { 1 } else { -1 };
        match e.iter_mut().find(|(x, _)| *x == c) {
            Some(slot) => slot.1 += sign,
            None => e.push((c, sign)),
        }
    }
    e
}

/// Classification of `b` for the character `χ_m`.
pub fn classify_tuple(q: &PrimeModulus, m: u64, b: &ShiftTuple) -> TupleClass {
    classify_exponents(q, m, &exponents(b, q.q()))
}

fn classify_exponents(q: &PrimeModulus, m: u64, e: &[(u64, i64)]) -> TupleClass {
    if e.iter().all(|&(_, x)| x == 0) {
        return TupleClass::Constant;
    }
    let n = q.order();
    let order = n / gcd(m % n, n).max(1);
    if e.iter().all(|&(_, x)| x.rem_euclid(order as i64) == 0) {
        TupleClass::Power
    } else {
        TupleClass::Good
    }
}

/// Number of distinct zeros and poles of `F_b` after cancellation.
pub fn root_count(q: u64, b: &ShiftTuple) -> usize {
    exponents(b, q).iter().filter(|&&(_, x)| x != 0).count()
}

/// Histogram of `dlog F_b(r)` over the `r` where `F_b(r)` is a unit.
fn dlog_histogram(q: &PrimeModulus, b: &ShiftTuple) -> Vec<u32> {
    let p = q.q();
    let r_b = b.reduced(p);
    let (top, bottom) = r_b.split_at(b.l);
    let n = q.order();
    let mut hist = vec![0u32; n as usize];
    'r: for r in 0..p {
        let mut e = 0u64;
        for &c in top {
            match q.dlog(q.add(r, c)) {
                Some(d) => e += d,
                None => continue 'r,
            }
        }
        for &c in bottom {
            match q.dlog(q.add(r, c)) {
                Some(d) => e += n - d,
                None => continue 'r,
            }
        }
        hist[(e % n) as usize] += 1;
    }
    hist
}

/// `Σ_r χ_m(F_b(r))` with zeros and poles contributing 0.
pub fn burgess_complete_sum(q: &PrimeModulus, m: u64, b: &ShiftTuple) -> Complex64 {
    let n = q.order();
    dlog_histogram(q, b)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(j, &c)| unit_root((m % n) * j as u64 % n, n) * c as f64)
        .sum()
}

/// `Σ_r χ_m(F_b(r))` for every character index `m`.
pub fn burgess_all_characters(q: &PrimeModulus, b: &ShiftTuple) -> Vec<Complex64> {
    let n = q.order();
    let hist = dlog_histogram(q, b);
    let roots: Vec<Complex64> = (0..n).map(|t| unit_root(t, n)).collect();
    (0..n)
        .map(|m| {
            hist.iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(j, &c)| roots[(m * j as u64 % n) as usize] * c as f64)
                .sum()
        })
        .collect()
}

/// Per-tuple outcome of an exhaustive Burgess sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BurgessRecord {
    pub b: Vec<i64>,
    pub worst_good: f64,
    pub worst_bad: f64,
    pub good_characters: usize,
}

/// Sweep over every tuple in `[lo, hi)^{2l}` and every nontrivial character.
/// `worst_*` are `max |Σ| / √q` over good and bad characters of the tuple.
pub fn burgess_sweep(q: &PrimeModulus, l: usize, lo: i64, hi: i64) -> Vec<BurgessRecord> {
    let tuples = ShiftTuple::enumerate_box(l, lo, hi);
    let sq = (q.q() as f64).sqrt();
    tuples
        .par_iter()
        .map(|b| {
            let sums = burgess_all_characters(q, b);
            let mut rec = BurgessRecord {
                b: b.entries().to_vec(),
                worst_good: 0.0,
                worst_bad: 0.0,
                good_characters: 0,
            };
            let e = exponents(b, q.q());
            for (m, s) in sums.iter().enumerate().skip(1) {
                let r = s.norm() / sq;
                if classify_exponents(q, m as u64, &e).is_bad() {
                    rec.worst_bad = rec.worst_bad.max(r);
                } else {
                    rec.good_characters += 1;
                    rec.worst_good = rec.worst_good.max(r);
                }
            }
            rec
        })
        .collect()
}

/// `K(r,b) = Π_{i≤l} K(r+b_i) conj(K(r+b_{i+l}))`.
pub fn big_k(k: &TraceFunction, r: u64, b: &ShiftTuple) -> Complex64 {
    let q = k.q();
    let red = b.reduced(q);
    let mut v = Complex64::new(1.0, 0.0);
    for (i, &c) in red.iter().enumerate() {
        let x = k.get((r % q + c) % q);
        v *= if i < b.l { x } else { x.conj() };
    }
    v
}

/// `R(r,b) = Σ_s K(sr, sb)`.
pub fn big_r(k: &TraceFunction, r: u64, b: &ShiftTuple) -> Complex64 {
    let q = k.q();
    let red = b.reduced(q);
    let r = r % q;
    (0..q)
        .map(|s| {
            let mut v = Complex64::new(1.0, 0.0);
            for (i, &c) in red.iter().enumerate() {
                let x = k.get(s * ((r + c) % q) % q);
                v *= if i < b.l { x } else { x.conj() };
            }
            v
        })
        .sum()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShiftSums {
    #[serde(with = "crate::report::complex")]
    pub k_big: Complex64,
    #[serde(with = "crate::report::complex")]
    pub r_big: Complex64,
}

pub fn shift_sums(k: &TraceFunction, r: u64, b: &ShiftTuple) -> Result<ShiftSums> {
    k.prime()?;
    Ok(ShiftSums {
        k_big: big_k(k, r, b),
        r_big: big_r(k, r, b),
    })
}

/// `Σ_r |R(r,b)|² − q Σ_r |K(r,b)|²`.
pub fn type_ii_complete_sum(k: &TraceFunction, b: &ShiftTuple) -> Result<f64> {
    k.prime()?;
    let q = k.q();
    let (mut r2, mut k2) = (0.0, 0.0);
    for r in 0..q {
        r2 += big_r(k, r, b).norm_sqr();
        k2 += big_k(k, r, b).norm_sqr();
    }
    Ok(r2 - q as f64 * k2)
}

/// Which closed form reproduces `R(r,b)` for `K = e_q(x̄ + x)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KloostermanCase {
    pub a: u64,
    pub b: u64,
    #[serde(with = "crate::report::complex")]
    pub direct: Complex64,
    #[serde(with = "crate::report::complex")]
    pub product_form: Complex64,
    #[serde(with = "crate::report::complex_opt")]
    pub quotient_form: Option<Complex64>,
    pub product_error: f64,
    pub quotient_error: Option<f64>,
}

/// `R(r,b)` for `K = e_q(x̄ + x)` against `√q Kl₂(A·B)` and `√q Kl₂(A/B)`, where
/// `A = Σ (1/(r+b_i) − 1/(r+b_{i+l}))` and `B = Σ (b_i − b_{i+l})`.
pub fn kloosterman_case_candidates(
    q: &PrimeModulus,
    k: &TraceFunction,
    r: u64,
    b: &ShiftTuple,
) -> Result<KloostermanCase> {
    let p = q.q();
    let red = b.reduced(p);
    let mut a = 0u64;
    for (i, &c) in red.iter().enumerate() {
        let inv = q.inv(q.add(r, c)).ok_or_else(|| {
            Error::InvalidArgument(format!("r = {r} hits the pole −b_{}", i + 1))
        })?;
        a = if i < b.l { q.add(a, inv) } else { q.add(a, q.neg(inv)) };
    }
    let bb = b.shift_balance(p);
    let direct = big_r(k, r, b);
    let sq = (p as f64).sqrt();
    let product_form = kl2_direct(p, q.mul(a, bb)) * sq;
    let quotient_form = q.inv(bb).map(|bi| kl2_direct(p, q.mul(a, bi)) * sq);
    Ok(KloostermanCase {
        a,
        b: bb,
        direct,
        product_form,
        quotient_form,
        product_error: (direct - product_form).norm(),
        quotient_error: quotient_form.map(|v| (direct - v).norm()),
    })
}
