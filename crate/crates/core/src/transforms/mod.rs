//! Transforms over `F_q`: additive Fourier, Mellin, multiplicative convolution,
//! Voronoi, and Gauss sums, all driven by a chirp-z DFT.

pub mod dft;
mod fourier;
mod multiplicative;

pub use dft::{dft, naive_dft, DftPlan, Direction, MAX_DFT_LEN};
pub use fourier::{fourier, voronoi_transform};
pub(crate) use fourier::fourier_values;
pub use multiplicative::{
    gauss_sum, gauss_sums_all, hyper_kloosterman_all, kloosterman, mellin, mellin_inverse,
    mult_convolution, CharacterSpectrum, MAX_CONVOLUTION_MODULUS,
};
