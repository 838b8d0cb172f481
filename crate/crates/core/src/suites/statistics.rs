use std::sync::Arc;

use super::Check;
use crate::arith::{make_prime_modulus, primes_in_range, PrimeModulus};
use crate::error::Result;
use crate::satotate::{weyl_sym_power, Domain, SpectralMeasure, CATALAN, CENTRAL_BINOMIAL};
use crate::sums::{
    correlation, kloosterman_fourth_moment, kloosterman_fourth_power_sum_closed,
    kloosterman_fourth_power_sum_oracle, moment,
};
use crate::thresholds::{BOUND_SLACK, FOURTH_MOMENT_REL_TOL, IDENTITY_TOL, SELF_CORRELATION_MIN};
use crate::transforms::{hyper_kloosterman_all, kloosterman};

fn field(q: u64) -> Result<Arc<PrimeModulus>> {
    Ok(Arc::new(make_prime_modulus(q)?))
}

/// `max_a |Kl₂(a; q)|` over every prime in `[lo, hi]`, against `2`.
pub fn weil_bound_range(lo: u64, hi: u64) -> Result<Check> {
    let mut worst = (0.0f64, 0u64);
    let primes = primes_in_range(lo, hi);
    for &q in &primes {
        let m = kloosterman(&field(q)?)?.sup_norm_observed();
        if m > worst.0 {
            worst = (m, q);
        }
    }
    Ok(Check::at_most(format!("Weil bound q in [{lo},{hi}]"), "Weil bound", worst.0, 2.0 + BOUND_SLACK)
        .with_detail(format!("{} primes, max at q={}", primes.len(), worst.1)))
}

/// `max_a |Kl_k(a; q)|` over every prime in `[lo, hi]`, against `k`.
pub fn deligne_bound_range(k: u32, lo: u64, hi: u64) -> Result<Check> {
    let mut worst = (0.0f64, 0u64);
    let primes = primes_in_range(lo, hi);
    for &q in &primes {
        let m = hyper_kloosterman_all(&field(q)?, k)?.sup_norm_observed();
        if m > worst.0 {
            worst = (m, q);
        }
    }
    Ok(Check::at_most(
        format!("Deligne bound k={k} q in [{lo},{hi}]"),
        "Deligne bound",
        worst.0,
        k as f64 + BOUND_SLACK,
    )
    .with_detail(format!("{} primes, max at q={}", primes.len(), worst.1)))
}

/// Quadrature moments of the reference measures against Catalan numbers and central binomials.
pub fn moment_oracles(l_max: u32) -> Vec<Check> {
    let mut out = Vec::new();
    for l in 0..=l_max {
        let st = SpectralMeasure::SatoTate.moment(l);
        out.push(Check::at_most(
            format!("Sato–Tate moment l={l}"),
            "Catalan numbers",
            (st - CATALAN[l as usize]).abs(),
            IDENTITY_TOL,
        ));
        for mu in [SpectralMeasure::UniformInterval, SpectralMeasure::UniformCircle] {
            out.push(Check::at_most(
                format!("{} moment l={l}", mu.tag()),
                "central binomial coefficients",
                (mu.moment(l) - CENTRAL_BINOMIAL[l as usize]).abs(),
                IDENTITY_TOL,
            ));
        }
    }
    out
}

/// `|M_{2l}(Kl₂) − C_l|` shrinks from `q_small` to `q_large`, for `1 ≤ l ≤ l_max`.
pub fn moment_monotonicity(q_small: u64, q_large: u64, l_max: u32) -> Result<Vec<Check>> {
    let ks = kloosterman(&field(q_small)?)?;
    let kl = kloosterman(&field(q_large)?)?;
    Ok((1..=l_max)
        .map(|l| {
            let c = CATALAN[l as usize];
            let small = (moment(&ks, l) - c).abs();
            let large = (moment(&kl, l) - c).abs();
            Check::holds(format!("moment l={l} improves {q_small}→{q_large}"), "Sato–Tate moments", large < small)
                .with_detail(format!("{small:e} → {large:e}"))
        })
        .collect())
}

/// `C(Kl₂, Kl₂) ≥ 0.9`.
pub fn self_correlation(q: u64) -> Result<Check> {
    let kl = kloosterman(&field(q)?)?;
    let c = correlation(&kl, &kl)?.re;
    Ok(Check::at_least(format!("C(Kl₂,Kl₂) q={q}"), "quasi-orthogonality of trace functions", c, SELF_CORRELATION_MIN))
}

/// Fourth moment at `q`: exact integer comparison of the combinatorial oracle, the closed form and
/// the rounded floating-point sum.
pub fn fourth_moment_exact(q: u64) -> Result<Vec<Check>> {
    let f = field(q)?;
    let oracle = kloosterman_fourth_power_sum_oracle(&f);
    let closed = kloosterman_fourth_power_sum_closed(q);
    let float = kloosterman_fourth_moment(&kloosterman(&f)?) * (q * q) as f64;
    let rounded = float.round() as u128;
    Ok(vec![
        Check::holds(format!("fourth moment closed form q={q}"), "Kloosterman fourth moment", oracle == closed)
            .with_detail(format!("oracle {oracle}, closed form {closed}")),
        Check::holds(format!("fourth moment transform q={q}"), "Kloosterman fourth moment", rounded == oracle)
            .with_detail(format!("q² Σ|Kl₂|⁴ = {float}")),
    ])
}

/// Fourth moment at `q` against the closed form, relative tolerance.
pub fn fourth_moment_closed(q: u64) -> Result<Check> {
    let closed = kloosterman_fourth_power_sum_closed(q) as f64;
    let float = kloosterman_fourth_moment(&kloosterman(&field(q)?)?) * (q * q) as f64;
    Ok(Check::at_most(
        format!("fourth moment closed form q={q}"),
        "Kloosterman fourth moment",
        (float - closed).abs() / closed,
        FOURTH_MOMENT_REL_TOL,
    )
    .with_detail(format!("closed form {closed}")))
}

/// `M₂ = 1 + mean U₂` on the units, since `(2cosθ)² = U₂ + U₀`.
pub fn weyl_consistency(q: u64) -> Result<Check> {
    let kl = kloosterman(&field(q)?)?;
    let n = (q - 1) as f64;
    let m2_units = moment(&kl, 1) * q as f64 / n;
    let u2 = weyl_sym_power(&kl, 2, &Domain::Units)?;
    Ok(Check::at_most(format!("M₂ = 1 + mean U₂ q={q}"), "Chebyshev expansion", (m2_units - 1.0 - u2).abs(), 1e-9))
}

/// Symmetric-power Weyl sums of `Kl₂` for orders `1..=order_max`, reported.
pub fn weyl_sums(q: u64, order_max: u32) -> Result<Vec<Check>> {
    let kl = kloosterman(&field(q)?)?;
    (1..=order_max)
        .map(|k| {
            let w = weyl_sym_power(&kl, k, &Domain::Units)?;
            Ok(Check::report(format!("Weyl sum Sym^{k} q={q}"), "Sato–Tate equidistribution", w))
        })
        .collect()
}
