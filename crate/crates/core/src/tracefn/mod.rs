//! Trace functions over `F_q` and the concrete families built from them.

pub mod composite;
pub mod families;
pub mod function;
pub mod io;
pub mod ops;
pub mod pgl2;

pub use composite::{composite_kloosterman, composite_kloosterman_many, kl2_direct, kl2_direct_many, CompositeKloosterman};
pub use families::*;
pub use function::{FamilyMeta, Modulus, TraceFunction, CONTRACT_TOL};
pub use io::{read_tfn, write_tfn};
pub use ops::{all_ones, conjugate, dirac, from_values, product, scale};
pub use pgl2::{multiplicative_shift, pullback, Pgl2Element};
