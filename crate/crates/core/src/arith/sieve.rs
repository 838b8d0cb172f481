use crate::error::{Error, Result};

pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// Classical arithmetic functions tabulated for `n ≤ limit` (index 0 unused).
#[derive(Debug, Clone)]
pub struct ArithmeticTables {
    limit: u64,
    primes: Vec<u64>,
    mu: Vec<i8>,
    lambda: Vec<f64>,
    d2: Vec<u32>,
    d3: Vec<u32>,
}

/// Linear sieve producing primes, Möbius, von Mangoldt and the divisor functions `d_2`, `d_3`.
pub fn sieve_tables(limit: u64) -> Result<ArithmeticTables> {
    if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
        return Err(Error::Capacity(format!(
            "sieve limit {limit} outside [2, {MAX_SIEVE_LIMIT}]"
        )));
    }
    let n = limit as usize;
    let mut primes: Vec<u64> = Vec::new();
    let mut spf = vec![0u32; n + 1];
    // exponent of the smallest prime, and n with that prime power removed
    let mut exp = vec![0u8; n + 1];
    let mut rest = vec![0u32; n + 1];
    let mut mu = vec![0i8; n + 1];
    let mut lambda = vec![0.0f64; n + 1];
    let mut d2 = vec![0u32; n + 1];
    let mut d3 = vec![0u32; n + 1];
    mu[1] = 1;
    d2[1] = 1;
    d3[1] = 1;
    rest[1] = 1;
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            exp[i] = 1;
            rest[i] = 1;
            primes.push(i as u64);
        }
        let p = spf[i] as usize;
        let e = exp[i] as u32;
        let r = rest[i] as usize;
        mu[i] = if e > 1 { 0 } else { -mu[r] };
        d2[i] = d2[r] * (e + 1);
        d3[i] = d3[r] * (e + 1) * (e + 2) / 2;
        if r == 1 {
            lambda[i] = (p as f64).ln();
        }
        for &q in &primes {
            let q = q as usize;
            if q > p || i * q > n {
                break;
            }
            let m = i * q;
            spf[m] = q as u32;
            if q == p {
                exp[m] = exp[i] + 1;
                rest[m] = rest[i];
            } else {
                exp[m] = 1;
                rest[m] = i as u32;
            }
        }
    }
    Ok(ArithmeticTables {
        limit,
        primes,
        mu,
        lambda,
        d2,
        d3,
    })
}

impl ArithmeticTables {
    pub fn limit(&self) -> u64 {
        self.limit
    }
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }
    /// Primes up to and including `x`.
    pub fn primes_up_to(&self, x: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= x);
        &self.primes[..end]
    }
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }
    pub fn lambda(&self, n: u64) -> f64 {
        self.lambda[n as usize]
    }
    pub fn d2(&self, n: u64) -> u32 {
        self.d2[n as usize]
    }
    pub fn d3(&self, n: u64) -> u32 {
        self.d3[n as usize]
    }
    pub fn divisor_k(&self, k: u32, n: u64) -> u32 {
        match k {
            1 => 1,
            2 => self.d2(n),
            3 => self.d3(n),
            _ => panic!("divisor function d_{k} is not tabulated"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    #[test]
    fn x10() {
        let t = sieve_tables(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
        assert_eq!(t.mu(6), 1);
        assert!((t.lambda(8) - 2f64.ln()).abs() < 1e-15);
        // d3(4): ordered triples (a,b,c) with abc=4
        let brute = divisors(4).iter().map(|&a| divisors(4 / a).len() as u32).sum::<u32>();
        assert_eq!(brute, 6);
        assert_eq!(t.d3(4), 6);
    }

    #[test]
    fn x2() {
        let t = sieve_tables(2).unwrap();
        assert_eq!(t.primes(), &[2]);
        assert_eq!(t.mu(1), 1);
        assert_eq!(t.mu(2), -1);
    }

    #[test]
    fn x30_divisor_functions() {
        let t = sieve_tables(30).unwrap();
        assert_eq!(t.d2(12), 6);
        assert_eq!(t.d3(12), 18);
    }

    #[test]
    fn out_of_range() {
        assert!(sieve_tables(1).unwrap_err().is_capacity());
        assert!(sieve_tables(MAX_SIEVE_LIMIT + 1).unwrap_err().is_capacity());
    }

    #[test]
    fn convolution_identities() {
        let t = sieve_tables(5000).unwrap();
        for n in 1..=5000u64 {
            let ds = divisors(n);
            let mu_sum: i32 = ds.iter().map(|&d| t.mu(d) as i32).sum();
            assert_eq!(mu_sum, (n == 1) as i32, "n={n}");
            let lam: f64 = ds.iter().map(|&d| t.lambda(d)).sum();
            assert!((lam - (n as f64).ln()).abs() < 1e-9, "n={n}");
            assert_eq!(t.d2(n) as usize, ds.len());
            let d3: u32 = ds.iter().map(|&a| t.d2(n / a)).sum();
            assert_eq!(t.d3(n), d3);
        }
    }
}
