//! Equidistribution statistics for angles of trace functions.

mod angles;
mod measure;
mod surveys;

pub use angles::{
    angle_of, chebyshev_u, extract_angles, ks_distance, weyl_sym_power, AngleSample, Domain,
    Provenance, ANGLE_TOL,
};
pub use measure::{sato_tate_order_k_sample, SpectralMeasure, CATALAN, CENTRAL_BINOMIAL};
pub use surveys::{
    almost_prime_survey, birch_family_survey, birch_vertical_survey, discriminant_zero_count,
    gauss_angle_survey, horizontal_survey, kloosterman_angles, nonzero_squares, salie_angles,
    AlmostPrimeRow, AlmostPrimeSurvey, BirchMode, BirchSurvey, GaussSurvey, HorizontalRow,
    HorizontalSurvey, BIRCH_FULL_MAX, HORIZONTAL_MAX,
};
