//! Pinned tolerances and thresholds used by the check suites.

/// Default seed for every randomized input.
pub const DEFAULT_SEED: u64 = 0x5EED_F00D;

/// Absolute tolerance for exact identities.
pub const IDENTITY_TOL: f64 = 1e-8;

/// Floating slack added to the Weil and Deligne bounds.
pub const BOUND_SLACK: f64 = 1e-9;

/// `|M_{2l} − C_l| ≤ MOMENT_BASE^l / √q`.
pub const MOMENT_BASE: f64 = 10.0;

/// Diagonal self-correlation lower bound for `Kl₂`.
pub const SELF_CORRELATION_MIN: f64 = 0.9;

/// Relative tolerance for the closed form of the fourth moment.
pub const FOURTH_MOMENT_REL_TOL: f64 = 1e-6;

/// Paired Khan–Ngo sums must be at least this fraction of `q`.
pub const PAIRED_FRACTION: f64 = 0.5;

/// Number of sampled intervals in the logarithmic-range survey.
pub const FKMRRS_SAMPLES: usize = 50;

/// Number of random functions per modulus in the Fourier checks.
pub const FOURIER_SAMPLES: usize = 5;
