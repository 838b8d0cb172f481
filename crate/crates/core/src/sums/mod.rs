//! Incomplete and complete sums of trace functions.

mod bilinear;
mod bump;
mod correlation;
mod interval;
mod primes;
mod product;
mod shifts;

pub use bilinear::{ab_shift_sum, bilinear_form, AbShiftReport, BilinearReport, CoefficientSequence};
pub use bump::{SmoothBump, BUMP_NODES};
pub use correlation::{
    correlation, is_paired, khan_ngo_sum, kloosterman_fourth_moment,
    kloosterman_fourth_power_sum_closed, kloosterman_fourth_power_sum_oracle, moment,
    multicorrelation, Shifted,
};
pub(crate) use interval::DualWeights;
pub use interval::{
    fkmrrs_sample, interval_sum, poisson_dual, pv_bruteforce, pv_extremal_scan, pv_ratio,
    smoothed_sum, ExtremalInterval, SampledInterval, POISSON_TRUNCATION,
};
pub use primes::{
    divisor_in_ap, heath_brown_check, heath_brown_max_delta, heath_brown_table, prime_sum,
    prime_sum_ratio, DiscrepancyReport, HeathBrownCheck, HEATH_BROWN_MAX_N,
};
pub use product::{
    kl2_components, smoothed_product_sum, smoothed_product_sum_poisson, vdc_sum, VdcReport,
    PRODUCT_SUM_BUDGET,
};
pub use shifts::{
    big_k, big_r, burgess_all_characters, burgess_complete_sum, burgess_sweep, classify_tuple,
    kloosterman_case_candidates, root_count, shift_sums, type_ii_complete_sum, BurgessRecord,
    KloostermanCase, ShiftSums, ShiftTuple, TupleClass,
};
