use std::sync::Arc;

use rayon::prelude::*;

use super::Check;
use crate::arith::{is_prime, make_prime_modulus, primes_in_range, PrimeModulus, RationalFunctionModQ};
use crate::calibration::{CalibrationEntry, Manifest, FREEZE_FACTOR};
use crate::error::{Error, Result};
use crate::satotate::{
    birch_vertical_survey, gauss_angle_survey, kloosterman_angles, ks_distance, salie_angles,
    BirchMode, SpectralMeasure, CATALAN,
};
use crate::sums::{
    bilinear_form, burgess_sweep, correlation, fkmrrs_sample, is_paired, khan_ngo_sum,
    kl2_components, moment, pv_ratio, type_ii_complete_sum, vdc_sum, CoefficientSequence,
    ShiftTuple, SmoothBump,
};
use crate::thresholds::FKMRRS_SAMPLES;
use crate::tracefn::{additive_phase, legendre_character, multiplicative_shift, TraceFunction};
use crate::transforms::kloosterman;

/// A ratio statistic whose threshold is frozen in the calibration manifest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    PvKl2,
    PvLegendre,
    PvInverse,
    FkmrrsKl2,
    KsKl2,
    KsSalie,
    KsBirch,
    KsGauss,
    QuasiOrthogonality,
    MomentL1,
    MomentL2,
    MomentL3,
    KhanNgo,
    Vdc,
    Burgess,
    TypeII,
    Bilinear,
}

/// Shift range of the Khan–Ngo survey, `[1, 8]`.
pub const KHAN_NGO_RANGE: (u64, u64) = (1, 8);
/// Burgess survey: `l = 2`, `B = 10`, swept over `[0, 2B)`.
pub const BURGESS_L: usize = 2;
pub const BURGESS_B: i64 = 10;
/// Type II survey: `l = 2`, dyadic box `[10, 20)`.
pub const TYPE_II_B: i64 = 10;
/// Bilinear survey: `M = N = 31`.
pub const BILINEAR_LENGTH: u64 = 31;
/// Largest `c = pq` in the van der Corput grid.
pub const VDC_MAX_MODULUS: u64 = 100_000;

impl Statistic {
    pub const ALL: [Statistic; 17] = [
        Statistic::PvKl2,
        Statistic::PvLegendre,
        Statistic::PvInverse,
        Statistic::FkmrrsKl2,
        Statistic::KsKl2,
        Statistic::KsSalie,
        Statistic::KsBirch,
        Statistic::KsGauss,
        Statistic::QuasiOrthogonality,
        Statistic::MomentL1,
        Statistic::MomentL2,
        Statistic::MomentL3,
        Statistic::KhanNgo,
        Statistic::Vdc,
        Statistic::Burgess,
        Statistic::TypeII,
        Statistic::Bilinear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::PvKl2 => "pv_kl2",
            Statistic::PvLegendre => "pv_legendre",
            Statistic::PvInverse => "pv_inverse_phase",
            Statistic::FkmrrsKl2 => "fkmrrs_kl2",
            Statistic::KsKl2 => "ks_kl2",
            Statistic::KsSalie => "ks_salie",
            Statistic::KsBirch => "ks_birch",
            Statistic::KsGauss => "ks_gauss",
            Statistic::QuasiOrthogonality => "quasi_orthogonality",
            Statistic::MomentL1 => "moment_l1",
            Statistic::MomentL2 => "moment_l2",
            Statistic::MomentL3 => "moment_l3",
            Statistic::KhanNgo => "khan_ngo",
            Statistic::Vdc => "vdc",
            Statistic::Burgess => "burgess",
            Statistic::TypeII => "type_ii",
            Statistic::Bilinear => "bilinear",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {name}")))
    }

    pub fn family(self) -> &'static str {
        match self {
            Statistic::PvLegendre => "legendre",
            Statistic::PvInverse => "e_q(1/x)",
            Statistic::KsSalie => "salie",
            Statistic::KsBirch => "birch",
            Statistic::KsGauss => "gauss",
            Statistic::Burgess => "character",
            Statistic::TypeII => "e_q(1/x + x)",
            _ => "kl2",
        }
    }

    /// The bound the statistic is normalized against.
    pub fn reference(self) -> &'static str {
        match self {
            Statistic::PvKl2 | Statistic::PvLegendre | Statistic::PvInverse => "Pólya–Vinogradov bound",
            Statistic::FkmrrsKl2 => "refined Pólya–Vinogradov range",
            Statistic::KsKl2 | Statistic::KsBirch => "Sato–Tate equidistribution",
            Statistic::KsSalie => "uniform equidistribution of Salié angles",
            Statistic::KsGauss => "equidistribution of Gauss sum arguments",
            Statistic::QuasiOrthogonality => "quasi-orthogonality of trace functions",
            Statistic::MomentL1 | Statistic::MomentL2 | Statistic::MomentL3 => "Sato–Tate moments",
            Statistic::KhanNgo => "Khan–Ngo multicorrelation bound",
            Statistic::Vdc => "q-van der Corput bound",
            Statistic::Burgess => "Weil bound for character sums",
            Statistic::TypeII => "type II complete sum bound",
            Statistic::Bilinear => "bilinear form bound",
        }
    }

    /// What is measured, in words.
    pub fn description(self) -> &'static str {
        match self {
            Statistic::PvKl2 | Statistic::PvLegendre | Statistic::PvInverse => {
                "max_I |S(K;I)| / (sqrt(q) log q), exact scan"
            }
            Statistic::FkmrrsKl2 => "max over sampled I of |S(K;I)| / (sqrt(q)(1 + log(|I|/sqrt(q))))",
            Statistic::KsKl2 => "KS distance of Kl2 angles to the Sato-Tate measure",
            Statistic::KsSalie => "KS distance of Salie angles over squares to uniform on [0, pi]",
            Statistic::KsBirch => "KS distance of the full Birch grid to the Sato-Tate measure",
            Statistic::KsGauss => "KS distance of Gauss sum arguments to uniform on the circle",
            Statistic::QuasiOrthogonality => "max_{a != 1} sqrt(q) |C([x a]*Kl2, Kl2)|",
            Statistic::MomentL1 => "sqrt(q) |M_2 - 1|",
            Statistic::MomentL2 => "sqrt(q) |M_4 - 2|",
            Statistic::MomentL3 => "sqrt(q) |M_6 - 5|",
            Statistic::KhanNgo => "max over unpaired l in [1,8]^4 of |sum_r prod Kl2(r/l_i)| / sqrt(q)",
            Statistic::Vdc => "|S| / (N^(1/2) (p + q^(1/2))^(1/2)), q = next prime >= p^2, N = c^(2/3)",
            Statistic::Burgess => "max over good (tuple, character) in [0,20)^4 of |sum| / sqrt(q)",
            Statistic::TypeII => "max over good tuples in [10,20)^4 of |complete sum| / q^(3/2)",
            Statistic::Bilinear => "bilinear bound ratio, random signs, M = N = 31",
        }
    }

    /// Threshold pinned for assertions.
    pub fn pinned_threshold(self) -> f64 {
        match self {
            Statistic::PvKl2 | Statistic::PvLegendre | Statistic::PvInverse => 5.0,
            Statistic::FkmrrsKl2 => 25.0,
            Statistic::KsKl2 | Statistic::KsSalie => 0.02,
            Statistic::KsBirch => 0.05,
            Statistic::KsGauss => 0.03,
            Statistic::QuasiOrthogonality => 25.0,
            Statistic::MomentL1 => 10.0,
            Statistic::MomentL2 => 100.0,
            Statistic::MomentL3 => 1000.0,
            Statistic::KhanNgo => 8.0,
            Statistic::Vdc => 10.0,
            Statistic::Burgess => 3.0,
            Statistic::TypeII => 10.0,
            Statistic::Bilinear => 30.0,
        }
    }

    /// Declared calibration grid. For [`Statistic::Vdc`] the entries are the small primes `p`.
    pub fn default_grid(self) -> Vec<u64> {
        match self {
            Statistic::PvKl2 | Statistic::PvLegendre | Statistic::PvInverse | Statistic::FkmrrsKl2 => {
                primes_in_range(101, 998)
            }
            Statistic::KsKl2 | Statistic::KsSalie | Statistic::KsGauss => vec![1009, 2003, 5003, 10007],
            Statistic::KsBirch => vec![101, 151, 199],
            Statistic::QuasiOrthogonality => vec![101, 211, 307, 499, 701, 1009],
            Statistic::MomentL1 | Statistic::MomentL2 | Statistic::MomentL3 => vec![1009, 2003, 5003, 10007],
            Statistic::KhanNgo => vec![101, 211, 307, 499],
            Statistic::Vdc => vdc_grid(),
            Statistic::Burgess => vec![61],
            Statistic::TypeII => vec![101],
            Statistic::Bilinear => vec![1009],
        }
    }

    /// The statistic at one modulus.
    pub fn evaluate(self, q: u64, seed: u64) -> Result<f64> {
        if self == Statistic::Vdc {
            return vdc_ratio(q);
        }
        let field = Arc::new(make_prime_modulus(q)?);
        let qf = q as f64;
        Ok(match self {
            Statistic::PvKl2 => pv_ratio(&kloosterman(&field)?),
            Statistic::PvLegendre => pv_ratio(&legendre_character(&field)),
            Statistic::PvInverse => pv_ratio(&additive_phase(&field, &RationalFunctionModQ::reciprocal(q))?),
            Statistic::FkmrrsKl2 => fkmrrs_sample(&kloosterman(&field)?, FKMRRS_SAMPLES, seed ^ q)
                .iter()
                .map(|s| s.ratio)
                .fold(0.0, f64::max),
            Statistic::KsKl2 => ks_distance(&kloosterman_angles(&field)?, SpectralMeasure::SatoTate)?,
            Statistic::KsSalie => ks_distance(&salie_angles(&field)?, SpectralMeasure::UniformInterval)?,
            Statistic::KsBirch => birch_vertical_survey(&field, BirchMode::Full)?.ks_sato_tate,
            Statistic::KsGauss => gauss_angle_survey(&field)?.ks_uniform_circle,
            Statistic::QuasiOrthogonality => quasi_orthogonality_max(&field)? * qf.sqrt(),
            Statistic::MomentL1 | Statistic::MomentL2 | Statistic::MomentL3 => {
                let l = match self {
                    Statistic::MomentL1 => 1,
                    Statistic::MomentL2 => 2,
                    _ => 3,
                };
                let m = moment(&kloosterman(&field)?, l);
                (m - CATALAN[l as usize]).abs() * qf.sqrt()
            }
            Statistic::KhanNgo => khan_ngo_extremes(&field)?.0 / qf.sqrt(),
            Statistic::Burgess => burgess_sweep(&field, BURGESS_L, 0, 2 * BURGESS_B)
                .iter()
                .map(|r| r.worst_good)
                .fold(0.0, f64::max),
            Statistic::TypeII => type_ii_max(&field)? / qf.powf(1.5),
            Statistic::Bilinear => {
                let kl = kloosterman(&field)?;
                let a = CoefficientSequence::random_signs(BILINEAR_LENGTH, seed);
                let b = CoefficientSequence::random_signs(BILINEAR_LENGTH, seed.wrapping_add(1));
                bilinear_form(&kl, &a, &b)?.bound_ratio
            }
            Statistic::Vdc => unreachable!(),
        })
    }

    /// Maximum of the statistic over `grid`.
    pub fn calibrate(self, grid: &[u64], seed: u64) -> Result<CalibrationEntry> {
        let observed_max = grid
            .iter()
            .map(|&q| self.evaluate(q, seed))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(CalibrationEntry {
            suite: self.name().into(),
            family: self.family().into(),
            statistic: self.description().into(),
            q_grid: grid.to_vec(),
            observed_max,
            frozen: FREEZE_FACTOR * observed_max,
            threshold: self.pinned_threshold(),
        })
    }

    /// The statistic at `q` against the manifest threshold.
    pub fn check(self, q: u64, manifest: &Manifest, seed: u64) -> Result<Check> {
        let limit = manifest.threshold(self.name())?;
        let observed = self.evaluate(q, seed)?;
        Ok(Check::at_most(format!("{} q={q}", self.name()), self.reference(), observed, limit)
            .with_detail(self.description()))
    }
}

/// Sampled-interval ratio of an arbitrary function against the manifest threshold.
pub fn fkmrrs_check(k: &TraceFunction, manifest: &Manifest, seed: u64) -> Result<Check> {
    let q = k.q();
    let observed = fkmrrs_sample(k, FKMRRS_SAMPLES, seed ^ q)
        .iter()
        .map(|s| s.ratio)
        .fold(0.0, f64::max);
    let stat = Statistic::FkmrrsKl2;
    Ok(Check::at_most(format!("fkmrrs {} q={q}", k.family()), stat.reference(), observed, manifest.threshold(stat.name())?)
        .with_detail(stat.description()))
}

/// Next prime `≥ n`.
pub fn next_prime(n: u64) -> u64 {
    (n.max(2)..).find(|&m| is_prime(m)).expect("primes are unbounded")
}

/// Primes `p ≥ 3` with `p · nextprime(p²) ≤ 10⁵`.
pub fn vdc_grid() -> Vec<u64> {
    primes_in_range(3, 400)
        .into_iter()
        .filter(|&p| p * next_prime(p * p) <= VDC_MAX_MODULUS)
        .collect()
}

/// van der Corput bound ratio for the `Kl₂` components at `p` and `q = nextprime(p²)`.
pub fn vdc_ratio(p: u64) -> Result<f64> {
    let q = next_prime(p * p);
    let fp = Arc::new(make_prime_modulus(p)?);
    let fq = Arc::new(make_prime_modulus(q)?);
    let (kp, kq) = kl2_components(&fp, &fq)?;
    let n = ((p * q) as f64).powf(2.0 / 3.0).floor();
    Ok(vdc_sum(&kp, &kq, n, &SmoothBump::new())?.bound_ratio)
}

/// `max_{a ∉ {0,1}} |C([×a]*Kl₂, Kl₂)|`.
pub fn quasi_orthogonality_max(q: &Arc<PrimeModulus>) -> Result<f64> {
    let kl = kloosterman(q)?;
    (2..q.q())
        .into_par_iter()
        .map(|a| Ok(correlation(&multiplicative_shift(&kl, a)?, &kl)?.norm()))
        .collect::<Result<Vec<f64>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max))
}

/// `(max over unpaired, min over paired)` of `|Σ_r Π Kl₂(l̄_i r)|` for `l ∈ [1,8]⁴`.
pub fn khan_ngo_extremes(q: &Arc<PrimeModulus>) -> Result<(f64, f64)> {
    let kl = kloosterman(q)?;
    let (lo, hi) = KHAN_NGO_RANGE;
    let width = hi - lo + 1;
    let tuples: Vec<[u64; 4]> = (0..width.pow(4))
        .map(|i| {
            [
                lo + i / width.pow(3),
                lo + i / width.pow(2) % width,
                lo + i / width % width,
                lo + i % width,
            ]
        })
        .collect();
    let values = tuples
        .par_iter()
        .map(|t| khan_ngo_sum(&kl, t).map(|s| (is_paired(t, q.q()), s.norm())))
        .collect::<Result<Vec<_>>>()?;
    let unpaired = values.iter().filter(|v| !v.0).map(|v| v.1).fold(0.0, f64::max);
    let paired = values.iter().filter(|v| v.0).map(|v| v.1).fold(f64::INFINITY, f64::min);
    Ok((unpaired, paired))
}

/// Good type II tuples: not diagonal, nonzero shift balance.
pub fn type_ii_good(b: &ShiftTuple, q: u64) -> bool {
    !b.is_diagonal(q) && b.shift_balance(q) != 0
}

/// `max |Σ_r |R|² − q Σ_r |K|²|` over good tuples in `[B, 2B)⁴` for `K = e_q(x̄ + x)`.
pub fn type_ii_max(q: &Arc<PrimeModulus>) -> Result<f64> {
    let k = additive_phase(q, &RationalFunctionModQ::kloosterman_phase(q.q()))?;
    ShiftTuple::enumerate_box(2, TYPE_II_B, 2 * TYPE_II_B)
        .par_iter()
        .filter(|b| type_ii_good(b, q.q()))
        .map(|b| type_ii_complete_sum(&k, b).map(f64::abs))
        .collect::<Result<Vec<f64>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max))
}

/// Recompute the listed statistics on their declared grids and update `manifest`.
pub fn recalibrate(manifest: &mut Manifest, stats: &[Statistic], grid: Option<&[u64]>) -> Result<()> {
    for &s in stats {
        let g = grid.map(<[u64]>::to_vec).unwrap_or_else(|| s.default_grid());
        manifest.upsert(s.calibrate(&g, manifest.seed)?);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Statistic::ALL {
            assert_eq!(Statistic::parse(s.name()).unwrap(), s);
        }
        assert!(Statistic::parse("nope").is_err());
    }

    #[test]
    fn vdc_grid_respects_modulus_cap() {
        let g = vdc_grid();
        assert_eq!(g.first(), Some(&3));
        assert!(g.contains(&31));
        for p in g {
            assert!(p * next_prime(p * p) <= VDC_MAX_MODULUS);
        }
        assert_eq!(next_prime(961), 967);
    }

    #[test]
    fn bundled_thresholds_are_the_pinned_ones() {
        let m = Manifest::bundled();
        for s in Statistic::ALL {
            assert_eq!(m.threshold(s.name()).unwrap(), s.pinned_threshold(), "{}", s.name());
        }
    }

    #[test]
    fn type_ii_good_excludes_diagonal() {
        let d = ShiftTuple::new(vec![11, 12, 12, 11], 10).unwrap();
        assert!(!type_ii_good(&d, 101));
        let z = ShiftTuple::new(vec![11, 14, 12, 13], 10).unwrap();
        assert!(!type_ii_good(&z, 101));
        let g = ShiftTuple::new(vec![11, 15, 12, 13], 10).unwrap();
        assert!(type_ii_good(&g, 101));
    }
}
