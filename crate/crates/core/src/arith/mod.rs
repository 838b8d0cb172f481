//! Exact integer and modular arithmetic: prime fields with discrete-log tables,
//! squarefree composite moduli, rational functions mod `q`, and sieved tables
//! of classical arithmetic functions.

mod composite;
pub mod modular;
mod prime_modulus;
mod rational;
mod sieve;

pub use composite::{make_composite_modulus, CompositeModulus};
pub use modular::is_prime;
pub use prime_modulus::{
    legendre, least_primitive_root, make_prime_modulus, PrimeModulus, MAX_TABLE_MODULUS,
};
pub use rational::{RationalFunctionModQ, RationalValue};
pub use sieve::{sieve_tables, ArithmeticTables, MAX_SIEVE_LIMIT};

/// Primes in `[lo, hi]` by trial primality testing.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| modular::is_prime(n)).collect()
}
