use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use tracefn_core::arith::modular::{factorize, gcd, inv_mod, is_squarefree};
use tracefn_core::arith::{is_prime, make_composite_modulus, make_prime_modulus, sieve_tables, PrimeModulus};
use tracefn_core::sums::{heath_brown_check, interval_sum, pv_bruteforce, pv_extremal_scan};
use tracefn_core::tracefn::{
    composite_kloosterman, from_values, pullback, read_tfn, write_tfn, Pgl2Element, TraceFunction,
};
use tracefn_core::transforms::{fourier, mellin, mellin_inverse, mult_convolution};

const SMALL_PRIMES: &[u64] = &[3, 5, 7, 11, 13, 29, 31, 53, 61, 97, 101, 127];

fn field(q: u64) -> Arc<PrimeModulus> {
    Arc::new(make_prime_modulus(q).unwrap())
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(SMALL_PRIMES)
}

fn function_on(q: u64) -> impl Strategy<Value = TraceFunction> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), q as usize).prop_map(move |v| {
        let values = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        from_values(&field(q), "random", values).unwrap()
    })
}

fn prime_and_function() -> impl Strategy<Value = TraceFunction> {
    prime().prop_flat_map(function_on)
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fourier_is_an_involution_up_to_reflection(k in prime_and_function()) {
        let q = k.q();
        let twice = fourier(&fourier(&k, -1).unwrap(), -1).unwrap();
        for x in 0..q {
            prop_assert!(close(twice.get(x), k.get((q - x) % q)));
        }
    }

    #[test]
    fn fourier_preserves_energy(k in prime_and_function(), sign in prop::sample::select(vec![-1i32, 1])) {
        let kh = fourier(&k, sign).unwrap();
        let a: f64 = k.values().iter().map(|v| v.norm_sqr()).sum();
        let b: f64 = kh.values().iter().map(|v| v.norm_sqr()).sum();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn mellin_inverts(k in prime_and_function()) {
        let q = k.prime().unwrap().clone();
        let back = mellin_inverse(&q, &mellin(&k).unwrap()).unwrap();
        for x in 1..q.q() {
            prop_assert!(close(back.get(x), k.get(x)));
        }
    }

    #[test]
    fn convolution_commutes((a, b) in prime().prop_flat_map(|q| (function_on(q), function_on(q)))) {
        let ab = mult_convolution(&a, &b).unwrap();
        let ba = mult_convolution(&b, &a).unwrap();
        for x in 0..a.q() {
            prop_assert!(close(ab.get(x), ba.get(x)));
        }
    }

    #[test]
    fn pullback_composes(
        k in prime_and_function(),
        m1 in prop::array::uniform4(-50i64..50),
        m2 in prop::array::uniform4(-50i64..50),
    ) {
        let q = k.q();
        let g1 = Pgl2Element::new(q, m1[0], m1[1], m1[2], m1[3]);
        let g2 = Pgl2Element::new(q, m2[0], m2[1], m2[2], m2[3]);
        prop_assume!(g1.is_ok() && g2.is_ok());
        let (g1, g2) = (g1.unwrap(), g2.unwrap());
        let stepwise = pullback(&pullback(&k, &g1).unwrap(), &g2).unwrap();
        let direct = pullback(&k, &g1.compose(&g2)).unwrap();
        for x in 0..q {
            if g2.apply(x).and_then(|y| g1.apply(y)).is_some() {
                prop_assert!(close(stepwise.get(x), direct.get(x)));
            }
        }
    }

    #[test]
    fn interval_sums_are_additive(k in prime_and_function(), cut in 0.0f64..1.0, len in 0.0f64..1.0) {
        let q = k.q();
        let a = ((q - 1) as f64 * cut) as u64;
        let b = a + ((q - 1 - a) as f64 * len) as u64;
        let whole = interval_sum(&k, 0, b).unwrap();
        let head = if a == 0 { Complex64::new(0.0, 0.0) } else { interval_sum(&k, 0, a - 1).unwrap() };
        prop_assert!(close(whole, head + interval_sum(&k, a, b).unwrap()));
    }

    #[test]
    fn extremal_interval_scan_is_exact(k in prime_and_function()) {
        let fast = pv_extremal_scan(&k);
        let slow = pv_bruteforce(&k);
        prop_assert!((fast.max - slow.max).abs() < 1e-9);
    }

    #[test]
    fn binary_format_round_trips(k in prime_and_function()) {
        let mut buf = Vec::new();
        write_tfn(&k, &mut buf).unwrap();
        let back = read_tfn(buf.as_slice()).unwrap();
        prop_assert_eq!(back.q(), k.q());
        prop_assert_eq!(back.family(), k.family());
        prop_assert_eq!(back.values(), k.values());
    }

    #[test]
    fn twisted_multiplicativity_holds(c in (3u64..4000).prop_filter("odd squarefree composite", |&c| {
        c % 2 == 1 && is_squarefree(c) && !is_prime(c)
    }), a in 1u64..1000) {
        prop_assume!(gcd(a, c) == 1);
        let r = composite_kloosterman(&make_composite_modulus(c).unwrap(), a).unwrap();
        prop_assert!(r.discrepancy() < 1e-9);
        prop_assert!(r.direct.norm() <= (1u64 << factorize(c).len()) as f64 + 1e-9);
    }

    #[test]
    fn modular_inverse_is_inverse(m in 2u64..1_000_000, a in 1u64..1_000_000) {
        match inv_mod(a, m) {
            Some(i) => prop_assert_eq!((a % m) * i % m, 1 % m),
            None => prop_assert!(gcd(a, m) != 1),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn heath_brown_identity_pointwise(n in 1u64..2000, j in 1u32..=3) {
        let tables = sieve_tables(2000).unwrap();
        let c = heath_brown_check(n, j, 1000, &tables).unwrap();
        prop_assert!(c.delta < 1e-8);
    }
}
