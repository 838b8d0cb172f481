use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use tracefn_core::arith::{
    make_prime_modulus, sieve_tables, ArithmeticTables, PrimeModulus, RationalFunctionModQ,
};
use tracefn_core::calibration::Manifest;
use tracefn_core::report::fmt_f64;
use tracefn_core::satotate::{
    angle_of, birch_vertical_survey, gauss_angle_survey, kloosterman_angles, ks_distance,
    nonzero_squares, salie_angles, AngleSample, BirchMode, SpectralMeasure, BIRCH_FULL_MAX,
};
use tracefn_core::suites::{
    fkmrrs_check, identities_suite, recalibrate, Check, Statistic, SuiteReport,
};
use tracefn_core::sums::{
    ab_shift_sum, burgess_complete_sum, classify_tuple, divisor_in_ap, kl2_components, prime_sum,
    vdc_sum, CoefficientSequence, ShiftTuple, SmoothBump,
};
use tracefn_core::thresholds::BOUND_SLACK;
use tracefn_core::tracefn::{
    additive_phase, character, elliptic_trace, legendre_character, salie_family, TraceFunction,
};
use tracefn_core::transforms::{gauss_sums_all, hyper_kloosterman_all, kloosterman};
use tracefn_core::{Error, Result};

use crate::args::AngleFamily;
use crate::output::{calibration_ref, failures, suite_outcome, to_value, Outcome, RunReport, Table};

fn field(q: u64) -> Result<Arc<PrimeModulus>> {
    Ok(Arc::new(make_prime_modulus(q)?))
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// `kl<k>`, `legendre`, `chi:<m>`, `inverse` (`e_q(x̄)`) or `kloosterman-phase` (`e_q(x̄ + x)`).
pub fn build_family(name: &str, q: &Arc<PrimeModulus>) -> Result<TraceFunction> {
    let p = q.q();
    match name {
        "legendre" => return Ok(legendre_character(q)),
        "inverse" => return additive_phase(q, &RationalFunctionModQ::reciprocal(p)),
        "kloosterman-phase" => return additive_phase(q, &RationalFunctionModQ::kloosterman_phase(p)),
        "salie" => return salie_family(q),
        _ => {}
    }
    if let Some(k) = name.strip_prefix("kl") {
        let k: u32 = k
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("unknown family {name}")))?;
        return hyper_kloosterman_all(q, k);
    }
    if let Some(m) = name.strip_prefix("chi:") {
        let m: u64 = m
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad character index in {name}")))?;
        return character(q, m);
    }
    Err(Error::InvalidArgument(format!("unknown family {name}")))
}

fn tables_for(limit: u64) -> Result<ArithmeticTables> {
    sieve_tables(limit.max(100))
}

pub fn identities(q: u64, seed: u64) -> Result<Outcome> {
    let f = field(q)?;
    let tables = tables_for(20_000)?;
    let suite = identities_suite(&f, &tables, seed)?;
    suite_outcome("identities", params([("q", q.to_string())]), seed, vec![], &suite)
}

pub fn bounds(q: u64, families: &[String], seed: u64) -> Result<Outcome> {
    let f = field(q)?;
    let manifest = Manifest::bundled();
    let mut suite = SuiteReport::new("bounds").param("q", q);
    let mut refs = Vec::new();
    for name in families {
        let k = build_family(name, &f)?;
        let sup = k.sup_norm_observed();
        if let Some(bound) = k.meta().sup_norm {
            let reference = if name == "kl2" { "Weil bound" } else { "Deligne bound" };
            suite.push(Check::at_most(format!("sup |{name}| q={q}"), reference, sup, bound + BOUND_SLACK));
        }
        let stat = match name.as_str() {
            "kl2" => Some(Statistic::PvKl2),
            "legendre" => Some(Statistic::PvLegendre),
            "inverse" => Some(Statistic::PvInverse),
            _ => None,
        };
        match stat {
            Some(s) => {
                suite.push(s.check(q, manifest, seed)?);
                refs.push(calibration_ref(manifest, s.name())?);
            }
            None => {
                let r = tracefn_core::sums::pv_ratio(&k);
                suite.push(Check::report(format!("pv {name} q={q}"), "Pólya–Vinogradov bound", r));
            }
        }
        if name == "kl2" {
            suite.push(fkmrrs_check(&k, manifest, seed)?);
            refs.push(calibration_ref(manifest, Statistic::FkmrrsKl2.name())?);
        }
    }
    let p = params([("q", q.to_string()), ("family", families.join(","))]);
    suite_outcome("bounds", p, seed, refs, &suite)
}

#[derive(Debug, Serialize)]
struct AngleSummary {
    q: u64,
    family: &'static str,
    measure: &'static str,
    sample_size: usize,
    ks: f64,
    /// `mean (2cosθ)^{2l}` for `l = 1, 2, 3`; empty on the circle.
    moments: Vec<f64>,
}

pub fn satotate(family: AngleFamily, grid: &[u64], seed: u64) -> Result<Outcome> {
    let mut summaries = Vec::new();
    let mut table = Table::new(&["modulus", "parameter", "re", "im", "angle"]);
    for &q in grid {
        let f = field(q)?;
        let (name, measure, sample) = match family {
            AngleFamily::Kl2 => {
                let kl = kloosterman(&f)?;
                for a in 1..q {
                    let v = kl.get(a);
                    table.push(row(q, a.to_string(), v.re, v.im, angle_of(a, v).ok()));
                }
                ("kl2", SpectralMeasure::SatoTate, kloosterman_angles(&f)?)
            }
            AngleFamily::Salie => {
                let s = salie_family(&f)?;
                for a in nonzero_squares(&f) {
                    let v = s.get(a);
                    table.push(row(q, a.to_string(), v.re, v.im, angle_of(a, v).ok()));
                }
                ("salie", SpectralMeasure::UniformInterval, salie_angles(&f)?)
            }
            AngleFamily::Birch => {
                let mode = if q <= BIRCH_FULL_MAX {
                    BirchMode::Full
                } else {
                    BirchMode::Sampled { pairs: 100_000, seed }
                };
                let survey = birch_vertical_survey(&f, mode)?;
                if let BirchMode::Full = mode {
                    let s = 1.0 / (q as f64).sqrt();
                    for a in 0..q {
                        for b in 0..q {
                            if let Some(t) = elliptic_trace(&f, a, b) {
                                let v = t as f64 * s;
                                let theta = (v / 2.0).clamp(-1.0, 1.0).acos();
                                table.push(row(q, format!("{a}:{b}"), v, 0.0, Some(theta)));
                            }
                        }
                    }
                } else {
                    for (i, &t) in survey.sample.angles.iter().enumerate() {
                        table.push(row(q, format!("sample:{i}"), 2.0 * t.cos(), 0.0, Some(t)));
                    }
                }
                ("birch", SpectralMeasure::SatoTate, survey.sample)
            }
            AngleFamily::Gauss => {
                let eps = gauss_sums_all(&f)?;
                let survey = gauss_angle_survey(&f)?;
                for (m, (v, t)) in eps.values.iter().skip(1).zip(&survey.sample.angles).enumerate() {
                    table.push(row(q, (m + 1).to_string(), v.re, v.im, Some(*t)));
                }
                ("gauss", SpectralMeasure::UniformCircle, survey.sample)
            }
        };
        summaries.push(summarize(q, name, measure, &sample)?);
    }
    let grid_s: Vec<String> = grid.iter().map(u64::to_string).collect();
    let report = RunReport {
        command: "satotate",
        params: params([("family", summaries.first().map_or("", |s| s.family).to_string()), ("q", grid_s.join(","))]),
        seed,
        calibration: vec![],
        passed: true,
        result: &summaries,
    };
    Ok(Outcome {
        json: to_value(&report)?,
        table,
        failures: vec![],
    })
}

fn row(q: u64, param: String, re: f64, im: f64, angle: Option<f64>) -> Vec<String> {
    vec![q.to_string(), param, fmt_f64(re), fmt_f64(im), angle.map(fmt_f64).unwrap_or_default()]
}

fn summarize(q: u64, family: &'static str, measure: SpectralMeasure, s: &AngleSample) -> Result<AngleSummary> {
    let moments = if s.circle {
        vec![]
    } else {
        (1..=3).map(|l| s.moment(l)).collect::<Result<_>>()?
    };
    Ok(AngleSummary {
        q,
        family,
        measure: measure.tag(),
        sample_size: s.len(),
        ks: ks_distance(s, measure)?,
        moments,
    })
}

pub fn vdc(p: u64, q: u64, n_grid: &[f64], seed: u64) -> Result<Outcome> {
    let (fp, fq) = (field(p)?, field(q)?);
    let (kp, kq) = kl2_components(&fp, &fq)?;
    let c = (p * q) as f64;
    let grid: Vec<f64> = if n_grid.is_empty() {
        vec![c.powf(2.0 / 3.0).floor()]
    } else {
        n_grid.to_vec()
    };
    let manifest = Manifest::bundled();
    let limit = manifest.threshold(Statistic::Vdc.name())?;
    let v = SmoothBump::new();
    let mut suite = SuiteReport::new("vdc").param("p", p).param("q", q);
    let mut reports = Vec::new();
    for &n in &grid {
        let r = vdc_sum(&kp, &kq, n, &v)?;
        suite.push(Check::at_most(format!("vdC ratio p={p} q={q} N={n}"), Statistic::Vdc.reference(), r.bound_ratio, limit));
        suite.push(Check::report(format!("vdC optimal ratio p={p} q={q} N={n}"), "q-van der Corput bound", r.optimal_ratio));
        reports.push(r);
    }
    let report = RunReport {
        command: "vdc",
        params: params([("p", p.to_string()), ("q", q.to_string()), ("N", format!("{grid:?}"))]),
        seed,
        calibration: vec![calibration_ref(manifest, Statistic::Vdc.name())?],
        passed: suite.passed(),
        result: (&suite, &reports),
    };
    Ok(Outcome {
        json: to_value(&report)?,
        table: Table::from_checks(&suite.checks),
        failures: failures(&suite.checks),
    })
}

#[derive(Debug, Serialize)]
struct BurgessRow {
    b: Vec<i64>,
    m: u64,
    class: String,
    #[serde(with = "tracefn_core::report::complex")]
    value: num_complex::Complex64,
    ratio: f64,
}

pub fn burgess(q: u64, l: usize, big_b: i64, m: Option<u64>, from_zero: bool, seed: u64) -> Result<Outcome> {
    let f = make_prime_modulus(q)?;
    if l == 0 {
        return Err(Error::InvalidArgument("l must be at least 1".into()));
    }
    let lo = if from_zero { 0 } else { big_b };
    let count = ((2 * big_b - lo).max(0) as f64).powi(2 * l as i32);
    if count * q as f64 > 1e10 {
        return Err(Error::Capacity(format!("{count} tuples at q={q} exceeds the sweep budget")));
    }
    let chars: Vec<u64> = match m {
        Some(0) => return Err(Error::InvalidArgument("character index must be nonzero".into())),
        Some(m) => vec![m % f.order()],
        None => (1..f.order()).collect(),
    };
    let bound = (2 * l - 1) as f64 * (q as f64).sqrt();
    let tuples = ShiftTuple::enumerate_box(l, lo, 2 * big_b);
    let mut rows = Vec::new();
    let (mut worst_good, mut worst_bad) = (0.0f64, 0.0f64);
    for b in &tuples {
        for &mi in &chars {
            let class = classify_tuple(&f, mi, b);
            let value = burgess_complete_sum(&f, mi, b);
            let ratio = value.norm() / (q as f64).sqrt();
            if class.is_bad() {
                worst_bad = worst_bad.max(ratio);
            } else {
                worst_good = worst_good.max(ratio);
            }
            if m.is_some() {
                rows.push(BurgessRow {
                    b: b.entries().to_vec(),
                    m: mi,
                    class: format!("{class:?}").to_lowercase(),
                    value,
                    ratio,
                });
            }
        }
    }
    let mut suite = SuiteReport::new("burgess").param("q", q).param("l", l).param("B", big_b);
    suite.push(
        Check::at_most(format!("good tuples q={q} l={l}"), "Weil bound for character sums", worst_good * (q as f64).sqrt(), bound + 1e-9)
            .with_detail(format!("{} tuples, {} characters", tuples.len(), chars.len())),
    );
    suite.push(Check::report(format!("bad tuples q={q} l={l}"), "Weil bound for character sums", worst_bad * (q as f64).sqrt()));
    let mut table = Table::new(&["b", "m", "class", "re", "im", "ratio"]);
    for r in &rows {
        let b: Vec<String> = r.b.iter().map(i64::to_string).collect();
        table.push(vec![b.join(" "), r.m.to_string(), r.class.clone(), fmt_f64(r.value.re), fmt_f64(r.value.im), fmt_f64(r.ratio)]);
    }
    if rows.is_empty() {
        table = Table::from_checks(&suite.checks);
    }
    let report = RunReport {
        command: "burgess",
        params: params([
            ("q", q.to_string()),
            ("l", l.to_string()),
            ("B", big_b.to_string()),
            ("char", m.map_or("all".into(), |m| m.to_string())),
            ("range", format!("[{lo}, {})", 2 * big_b)),
        ]),
        seed,
        calibration: vec![],
        passed: suite.passed(),
        result: (&suite, &rows),
    };
    Ok(Outcome {
        json: to_value(&report)?,
        table,
        failures: failures(&suite.checks),
    })
}

pub fn abshift(family: &str, q: u64, m: u64, n: f64, l: u32, seed: u64) -> Result<Outcome> {
    let f = field(q)?;
    let k = build_family(family, &f)?;
    let r = ab_shift_sum(&k, &CoefficientSequence::ones(m), n, &SmoothBump::new(), l)?;
    let mut suite = SuiteReport::new("abshift");
    suite.push(Check::report(format!("+ab shift {family} q={q} M={m} N={n} l={l}"), "type I bound by the +ab shift", r.ratio)
        .with_detail(format!("|value| = {:e}", r.value.norm())));
    let p = params([("family", family.into()), ("q", q.to_string()), ("M", m.to_string()), ("N", n.to_string()), ("l", l.to_string())]);
    suite_outcome("abshift", p, seed, vec![], &suite)
}

pub fn dap(k: u32, x: u64, q: u64, a: u64, seed: u64) -> Result<Outcome> {
    let tables = tables_for(x)?;
    let r = divisor_in_ap(k, x, q, a, &tables)?;
    let report = RunReport {
        command: "dap",
        params: params([("k", k.to_string()), ("X", x.to_string()), ("q", q.to_string()), ("a", a.to_string())]),
        seed,
        calibration: vec![],
        passed: true,
        result: &r,
    };
    let mut table = Table::new(&["k", "X", "q", "a", "progression_sum", "coprime_sum", "phi_q", "discrepancy", "ratio"]);
    table.push(vec![
        k.to_string(),
        x.to_string(),
        q.to_string(),
        a.to_string(),
        fmt_f64(r.progression_sum),
        fmt_f64(r.coprime_sum),
        r.phi_q.to_string(),
        fmt_f64(r.discrepancy),
        fmt_f64(r.ratio),
    ]);
    Ok(Outcome {
        json: to_value(&report)?,
        table,
        failures: vec![],
    })
}

#[derive(Debug, Serialize)]
struct PrimeSumResult {
    #[serde(with = "tracefn_core::report::complex")]
    value: num_complex::Complex64,
    prime_count: usize,
    ratio: f64,
}

pub fn primesum(family: &str, q: u64, x: u64, seed: u64) -> Result<Outcome> {
    let f = field(q)?;
    let k = build_family(family, &f)?;
    let tables = tables_for(x)?;
    let value = prime_sum(&k, x, &tables, None)?;
    let prime_count = tables.primes_up_to(x).len();
    let ratio = if prime_count == 0 { 0.0 } else { value.norm() / prime_count as f64 };
    let r = PrimeSumResult {
        value,
        prime_count,
        ratio,
    };
    let report = RunReport {
        command: "primesum",
        params: params([("family", family.into()), ("q", q.to_string()), ("X", x.to_string())]),
        seed,
        calibration: vec![],
        passed: true,
        result: &r,
    };
    let mut table = Table::new(&["family", "q", "X", "re", "im", "prime_count", "ratio"]);
    table.push(vec![family.into(), q.to_string(), x.to_string(), fmt_f64(value.re), fmt_f64(value.im), prime_count.to_string(), fmt_f64(ratio)]);
    Ok(Outcome {
        json: to_value(&report)?,
        table,
        failures: vec![],
    })
}

pub fn calibrate(suite: &str, grid: &[u64], manifest_path: &Path, seed: u64) -> Result<Outcome> {
    let mut manifest = if manifest_path.exists() {
        Manifest::from_json(&std::fs::read_to_string(manifest_path)?)?
    } else {
        Manifest::bundled().clone()
    };
    let stats: Vec<Statistic> = if suite == "all" {
        Statistic::ALL.to_vec()
    } else {
        vec![Statistic::parse(suite)?]
    };
    manifest.seed = seed;
    let grid = (!grid.is_empty()).then_some(grid);
    recalibrate(&mut manifest, &stats, grid)?;
    std::fs::write(manifest_path, manifest.to_json()? + "\n")?;
    let updated: Vec<_> = manifest
        .entries
        .iter()
        .filter(|e| stats.iter().any(|s| s.name() == e.suite))
        .cloned()
        .collect();
    let mut table = Table::new(&["suite", "family", "observed_max", "frozen", "threshold", "q_grid"]);
    for e in &updated {
        let g: Vec<String> = e.q_grid.iter().map(u64::to_string).collect();
        table.push(vec![e.suite.clone(), e.family.clone(), fmt_f64(e.observed_max), fmt_f64(e.frozen), fmt_f64(e.threshold), g.join(" ")]);
    }
    let report = RunReport {
        command: "calibrate",
        params: params([("suite", suite.into()), ("manifest", manifest_path.display().to_string())]),
        seed,
        calibration: vec![],
        passed: true,
        result: &updated,
    };
    Ok(Outcome {
        json: to_value(&report)?,
        table,
        failures: vec![],
    })
}
