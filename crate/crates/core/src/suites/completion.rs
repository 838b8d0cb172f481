use std::sync::Arc;

use super::calibrated::khan_ngo_extremes;
use super::Check;
use crate::arith::{make_prime_modulus, ArithmeticTables, PrimeModulus, RationalFunctionModQ};
use crate::error::Result;
use crate::sums::{
    ab_shift_sum, burgess_sweep, divisor_in_ap, kloosterman_case_candidates, prime_sum_ratio,
    CoefficientSequence, ShiftTuple, SmoothBump,
};
use crate::thresholds::{IDENTITY_TOL, PAIRED_FRACTION};
use crate::tracefn::additive_phase;
use crate::transforms::kloosterman;

fn field(q: u64) -> Result<Arc<PrimeModulus>> {
    Ok(Arc::new(make_prime_modulus(q)?))
}

/// Paired Khan–Ngo sums are at least `q/2`.
pub fn khan_ngo_paired(q: u64) -> Result<Check> {
    let (_, paired) = khan_ngo_extremes(&field(q)?)?;
    Ok(Check::at_least(
        format!("Khan–Ngo paired tuples q={q}"),
        "diagonal contribution of paired tuples",
        paired / q as f64,
        PAIRED_FRACTION,
    ))
}

/// Largest `|Σ_r χ(F_b(r))| / √q` over bad (tuple, character) pairs, reported.
pub fn burgess_bad_report(q: u64, l: usize, lo: i64, hi: i64) -> Result<Check> {
    let worst = burgess_sweep(&make_prime_modulus(q)?, l, lo, hi)
        .iter()
        .map(|r| r.worst_bad)
        .fold(0.0, f64::max);
    Ok(Check::report(format!("Burgess bad tuples q={q}"), "Weil bound for character sums", worst))
}

/// `R(r, b) = √q Kl₂(A·B)` for `K = e_q(x̄ + x)` at every `r` off the poles, with the
/// quotient form `√q Kl₂(A/B)` reported.
pub fn kloosterman_case(q: u64, b: &[i64]) -> Result<Vec<Check>> {
    let f = field(q)?;
    let k = additive_phase(&f, &RationalFunctionModQ::kloosterman_phase(q))?;
    let t = ShiftTuple::in_box(b.to_vec(), i64::MIN, i64::MAX)?;
    let (mut prod, mut quot) = (0.0f64, 0.0f64);
    for r in 0..q {
        if b.iter().any(|&c| (r as i64 + c).rem_euclid(q as i64) == 0) {
            continue;
        }
        let c = kloosterman_case_candidates(&f, &k, r, &t)?;
        prod = prod.max(c.product_error);
        quot = quot.max(c.quotient_error.unwrap_or(f64::INFINITY));
    }
    Ok(vec![
        Check::at_most(format!("R(r,b) = √q Kl₂(A·B) q={q}"), "completion of the shifted sum", prod, IDENTITY_TOL)
            .with_detail(format!("b = {b:?}")),
        Check::report(format!("R(r,b) − √q Kl₂(A/B) q={q}"), "completion of the shifted sum", quot)
            .with_detail(format!("b = {b:?}")),
    ])
}

/// `|Σ_{p≤q} Kl₂(p; q)| / π(q)` at `q`, reported.
pub fn prime_sum_cancellation(q: u64, tables: &ArithmeticTables) -> Result<f64> {
    prime_sum_ratio(&kloosterman(&field(q)?)?, q, tables)
}

/// Prime sum cancellation is stronger at `q_large` than at `q_small`, with `X = q`.
pub fn prime_sum_monotone(q_small: u64, q_large: u64, tables: &ArithmeticTables) -> Result<Check> {
    let small = prime_sum_cancellation(q_small, tables)?;
    let large = prime_sum_cancellation(q_large, tables)?;
    Ok(Check::holds(
        format!("prime sum ratio {q_large} < {q_small}"),
        "cancellation in sums of trace functions over primes",
        large < small,
    )
    .with_detail(format!("{small:e} → {large:e}")))
}

/// Divisor function discrepancy, reported with its ratio to `(X/q)/log X`.
pub fn divisor_discrepancy(k: u32, x: u64, q: u64, a: u64, tables: &ArithmeticTables) -> Result<Check> {
    let r = divisor_in_ap(k, x, q, a, tables)?;
    Ok(Check::report(format!("E(d_{k}; {q}, {a}) X={x}"), "divisor function in progressions", r.ratio)
        .with_detail(format!("E = {:e}", r.discrepancy)))
}

/// `+ab` shift sum for `K = e_q(x̄ + x)`, reported.
pub fn ab_shift_report(q: u64, m: u64, n: f64, l: u32) -> Result<Check> {
    let f = field(q)?;
    let k = additive_phase(&f, &RationalFunctionModQ::kloosterman_phase(q))?;
    let r = ab_shift_sum(&k, &CoefficientSequence::ones(m), n, &SmoothBump::new(), l)?;
    Ok(Check::report(format!("+ab shift q={q} M={m} N={n} l={l}"), "type I bound by the +ab shift", r.ratio)
        .with_detail(format!("|value| = {:e}", r.value.norm())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_tables;

    #[test]
    fn product_form_matches_at_101() {
        let c = kloosterman_case(101, &[1, 2, 3, 5]).unwrap();
        assert!(c[0].passed, "{}", c[0].line());
    }

    #[test]
    fn reports_do_not_fail() {
        let t = sieve_tables(10_000).unwrap();
        assert!(divisor_discrepancy(2, 10_000, 101, 1, &t).unwrap().passed);
        assert!(prime_sum_cancellation(101, &t).unwrap() < 1.0);
        assert!(ab_shift_report(1009, 10, 100.0, 2).unwrap().passed);
    }
}
