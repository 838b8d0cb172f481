use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{max_deviation, Check, SuiteReport};
use crate::arith::modular::{gcd, is_squarefree};
use crate::arith::{make_composite_modulus, ArithmeticTables, PrimeModulus};
use crate::error::Result;
use crate::sums::{smoothed_sum, DualWeights, SmoothBump, POISSON_TRUNCATION};
use crate::thresholds::{FOURIER_SAMPLES, IDENTITY_TOL};
use crate::tracefn::{
    additive_character, additive_phase, composite_kloosterman_many, dirac, from_values, kl2_direct,
    kloosterman_direct, legendre_character, salie_family, TraceFunction,
};
use crate::transforms::{
    fourier, fourier_values, gauss_sums_all, hyper_kloosterman_all, kloosterman,
    mult_convolution, voronoi_transform, DftPlan, Direction,
};
use crate::arith::RationalFunctionModQ;

fn exact(name: String, reference: &str, deviation: f64) -> Check {
    Check::at_most(name, reference, deviation, IDENTITY_TOL)
}

/// `Σ_x χ_m(x) χ̄_n(x) = (q−1)δ_{mn}` for every pair, `Σ_m χ_m(x) = (q−1)δ_{x,1}`,
/// and `Σ_x e_q(ax) = q δ_{a,0}`.
pub fn character_orthogonality(q: &PrimeModulus) -> Result<Vec<Check>> {
    let p = q.q();
    let n = q.order();
    let plan = DftPlan::new(n as usize)?;
    let mut pairs = 0.0f64;
    for b in 0..n {
        let row: Vec<Complex64> = q.powers().iter().map(|&x| q.character(b, x as u64).conj()).collect();
        // entry m is Σ_j χ_m(g^j) χ̄_b(g^j)
        let gram = plan.apply(&row, Direction::Plus);
        for (m, v) in gram.iter().enumerate() {
            let expect = if m as u64 == b { n as f64 } else { 0.0 };
            pairs = pairs.max((v - expect).norm());
        }
    }
    let mut dual = 0.0f64;
    for x in 0..p {
        let s: Complex64 = (0..n).map(|m| q.character(m, x)).sum();
        let expect = if x == 1 { n as f64 } else { 0.0 };
        dual = dual.max((s - expect).norm());
    }
    let mut additive = 0.0f64;
    for a in 0..p {
        let s: Complex64 = (0..p).map(|x| q.e_q(q.mul(a, x))).sum();
        let expect = if a == 0 { p as f64 } else { 0.0 };
        additive = additive.max((s - expect).norm());
    }
    Ok(vec![
        exact(format!("multiplicative orthogonality q={p}"), "orthogonality of characters", pairs),
        exact(format!("dual orthogonality q={p}"), "orthogonality of characters", dual),
        exact(format!("additive orthogonality q={p}"), "orthogonality of additive characters", additive),
    ])
}

/// `|ε_χ(1)| = 1` for nontrivial `χ`, and `ε_χ(a) = χ̄(a) ε_χ(1)` for each `a` in `twists`.
pub fn gauss_sum_identities(q: &PrimeModulus, twists: &[u64]) -> Result<Vec<Check>> {
    let p = q.q();
    let eps = gauss_sums_all(q)?;
    let unit = eps
        .values
        .iter()
        .skip(1)
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let plan = DftPlan::new(q.order() as usize)?;
    let s = 1.0 / (p as f64).sqrt();
    let mut twisted = 0.0f64;
    for &a in twists {
        let a = a % p;
        if a == 0 {
            continue;
        }
        let psi: Vec<Complex64> = q.powers().iter().map(|&x| q.e_q(q.mul(a, x as u64))).collect();
        let eps_a = plan.apply(&psi, Direction::Plus);
        for (m, v) in eps_a.iter().enumerate() {
            let expect = q.character(m as u64, a).conj() * eps.values[m];
            twisted = twisted.max((v * s - expect).norm());
        }
    }
    Ok(vec![
        exact(format!("|Gauss sum| = 1 q={p}"), "modulus of Gauss sums", unit),
        exact(format!("twisted Gauss sums q={p}"), "ε_χ(a) = χ̄(a) ε_χ(1)", twisted)
            .with_detail(format!("{} twists", twists.len())),
    ])
}

/// Twist parameters used for the Gauss identity at `q`: all units when `q ≤ full_limit`,
/// otherwise `2`, `−1`, the generator and `extra` seeded units.
pub fn gauss_twists(q: &PrimeModulus, full_limit: u64, extra: usize, seed: u64) -> Vec<u64> {
    let p = q.q();
    if p <= full_limit {
        return (1..p).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    let mut t = vec![2 % p, p - 1, q.generator()];
    t.extend((0..extra).map(|_| rng.gen_range(1..p)));
    t
}

/// Seeded random function with entries in the unit square.
pub fn random_function(q: &Arc<PrimeModulus>, seed: u64) -> Result<TraceFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..q.q())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    from_values(q, "random", v)
}

/// `F⁻F⁻K(x) = K(−x)` and `‖F⁻K‖₂ = ‖K‖₂` on seeded random functions.
pub fn fourier_identities(q: &Arc<PrimeModulus>, seed: u64) -> Result<Vec<Check>> {
    let p = q.q();
    let (mut inv, mut planch) = (0.0f64, 0.0f64);
    for i in 0..FOURIER_SAMPLES as u64 {
        let k = random_function(q, seed.wrapping_add(i).wrapping_mul(0x9E37_79B9) ^ p)?;
        let hat = fourier(&k, -1)?;
        let hathat = fourier(&hat, -1)?;
        inv = inv.max(max_deviation((0..p).map(|x| (hathat.get(x), k.get(q.neg(x))))));
        let a: f64 = k.values().iter().map(|v| v.norm_sqr()).sum();
        let b: f64 = hat.values().iter().map(|v| v.norm_sqr()).sum();
        planch = planch.max((a - b).abs());
    }
    Ok(vec![
        exact(format!("Fourier involution q={p}"), "double Fourier transform is reflection", inv),
        exact(format!("Plancherel q={p}"), "Plancherel formula", planch),
    ])
}

/// `ψ⋆ψ = Kl₂` and `Kl_k` from the transform pipeline against direct enumeration, `2 ≤ k ≤ k_max`.
pub fn convolution_identities(q: &Arc<PrimeModulus>, k_max: u32) -> Result<Vec<Check>> {
    let p = q.q();
    let psi = additive_character(q);
    let conv = mult_convolution(&psi, &psi)?;
    let direct2: Vec<Complex64> = (1..p).map(|a| kloosterman_direct(q, 2, a)).collect::<Result<_>>()?;
    let d = max_deviation((1..p).map(|a| (conv.get(a), direct2[a as usize - 1])));
    let mut out = vec![exact(format!("ψ⋆ψ = Kl₂ q={p}"), "convolution of additive characters", d)];
    for k in 2..=k_max {
        let kl = hyper_kloosterman_all(q, k)?;
        let mut dev = 0.0f64;
        for a in direct_arguments(q, k) {
            dev = dev.max((kl.get(a) - kloosterman_direct(q, k, a)?).norm());
        }
        out.push(exact(format!("Kl_{k} transform vs direct q={p}"), "hyper-Kloosterman sums", dev));
    }
    Ok(out)
}

/// Arguments checked against the direct `Kl_k` enumeration: every unit while `q^k` is small,
/// otherwise a fixed set including a generator and `−1`.
fn direct_arguments(q: &PrimeModulus, k: u32) -> Vec<u64> {
    let p = q.q();
    if (p as f64).powi(k as i32) <= DIRECT_ALL_BUDGET {
        return (1..p).collect();
    }
    let mut a: Vec<u64> = [1, 2, 3, 5, 7, q.generator(), p - 2, p - 1].into_iter().filter(|&a| a < p).collect();
    a.sort_unstable();
    a.dedup();
    a
}

/// Total direct-enumeration terms above which [`direct_arguments`] samples.
const DIRECT_ALL_BUDGET: f64 = 2e7;

/// `Kl₂(a; c) = Π_p Kl₂(a (c/p)^{-2}; p)` for every odd squarefree composite `c ≤ c_max`
/// and every `a` in `args` coprime to `c`.
pub fn twisted_multiplicativity(c_max: u64, args: &[u64]) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for c in (3..=c_max).step_by(2) {
        if !is_squarefree(c) || crate::arith::is_prime(c) {
            continue;
        }
        let cm = make_composite_modulus(c)?;
        let units: Vec<u64> = args.iter().copied().filter(|&a| gcd(a, c) == 1).collect();
        for f in composite_kloosterman_many(&cm, &units)? {
            worst = worst.max(f.discrepancy());
            count += 1;
        }
    }
    Ok(exact(format!("twisted multiplicativity c≤{c_max}"), "twisted multiplicativity of Kloosterman sums", worst)
        .with_detail(format!("{count} cases")))
}

/// `Voronoi(δ_a)(n) = q^{-1/2} Kl₂(an; q)` for every `a ≠ 0` and every `n`, with
/// `Kl₂(0; q)` read as the literal sum `−q^{-1/2}`.
pub fn voronoi_dirac(q: &Arc<PrimeModulus>) -> Result<Check> {
    let p = q.q();
    let s = 1.0 / (p as f64).sqrt();
    let kl0 = kl2_direct(p, 0);
    let kl = kloosterman(q)?;
    let mut worst = 0.0f64;
    for a in 1..p {
        let v = voronoi_transform(&dirac(q, a))?;
        for n in 0..p {
            let an = q.mul(a, n);
            let kl_an = if an == 0 { kl0 } else { kl.get(an) };
            worst = worst.max((v.get(n) - kl_an * s).norm());
        }
    }
    Ok(exact(format!("Voronoi of Dirac q={p}"), "Voronoi summation", worst))
}

/// `Λ(n)` against the Heath-Brown expansion for every `n < 2X`.
pub fn heath_brown_identity(j: u32, x: u64, tables: &ArithmeticTables) -> Result<Check> {
    let d = crate::sums::heath_brown_max_delta(j, x, tables)?;
    Ok(exact(format!("Heath-Brown J={j} X={x}"), "Heath-Brown identity", d)
        .with_detail(format!("all n < {}", 2 * x)))
}

/// The families exercised by the Poisson check.
pub fn poisson_families(q: &Arc<PrimeModulus>) -> Result<Vec<TraceFunction>> {
    let p = q.q();
    Ok(vec![
        kloosterman(q)?,
        hyper_kloosterman_all(q, 3)?,
        legendre_character(q),
        additive_phase(q, &RationalFunctionModQ::reciprocal(p))?,
        additive_phase(q, &RationalFunctionModQ::polynomial(p, &[0, 1, 0, 1]))?,
        salie_family(q)?,
    ])
}

/// Poisson summation `Σ K(n)V(n/N) = (N/√q) Σ_{|h| ≤ 50q/N} K̂(h) V̂(hN/q)` for each length in `ns`.
pub fn poisson_identity(q: &Arc<PrimeModulus>, ns: &[f64], families: &[TraceFunction]) -> Result<Check> {
    let v = SmoothBump::new();
    let hats: Vec<Vec<Complex64>> = families
        .iter()
        .map(|k| fourier_values(k.values(), Direction::Minus))
        .collect::<Result<_>>()?;
    let p = q.q() as i64;
    let mut worst = 0.0f64;
    for &n in ns {
        let w = DualWeights::new(&v, q.q(), n, POISSON_TRUNCATION);
        for (k, hat) in families.iter().zip(&hats) {
            let lhs = smoothed_sum(k, &v, n);
            let rhs = w.apply(|h| hat[h.rem_euclid(p) as usize]);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(exact(format!("Poisson summation q={}", q.q()), "Poisson summation formula", worst)
        .with_detail(format!("N in {ns:?}, {} families", families.len())))
}

/// Every exact identity at a single prime `q`.
pub fn identities_suite(q: &Arc<PrimeModulus>, tables: &ArithmeticTables, seed: u64) -> Result<SuiteReport> {
    let p = q.q();
    let mut r = SuiteReport::new("identities").param("q", p).param("seed", seed);
    r.extend(character_orthogonality(q)?);
    r.extend(gauss_sum_identities(q, &gauss_twists(q, 503, 3, seed))?);
    r.extend(fourier_identities(q, seed)?);
    let k_max = if p <= 101 { 4 } else if p <= 1009 { 3 } else { 2 };
    r.extend(convolution_identities(q, k_max)?);
    let c_max = (p * 30).min(30_000);
    r.push(twisted_multiplicativity(c_max, &[1, 2])?);
    r.push(voronoi_dirac(q)?);
    let x = (tables.limit() / 2).min(10_000);
    r.push(heath_brown_identity(3, x, tables)?);
    let qf = p as f64;
    let ns: Vec<f64> = [qf / 20.0, qf / 5.0].into_iter().filter(|&n| n >= 1.0).collect();
    r.push(poisson_identity(q, &ns, &poisson_families(q)?)?);
    Ok(r)
}
