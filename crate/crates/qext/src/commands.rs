//! The subcommands. Each returns its table and a one-line summary.

use std::collections::BTreeMap;

use qext_core::character::PlaceCatalog;
use qext_core::lfunction::convolve;
use qext_core::moments::{calibrate, MomentReport, SigmaKind};
use qext_core::ring::charsum_sweep;
use qext_core::{BaseField, Divisor, LPolynomial, Place, QuadExt};
use rayon::prelude::*;

use crate::cache;
use crate::config::{Command, RunConfig};
use crate::error::CliResult;
use crate::records::{encode, CharsumRecord, ExtRecord, LpolyRow, MomentRow, SigmaRow, VerifyRow};

/// Largest allowed `| |root| sqrt(q) - 1 |` over a family.
pub const RH_TOLERANCE: f64 = 1e-9;
/// Sweep constant above which the character-sum bound counts as violated.
pub const CHARSUM_MAX_CONSTANT: f64 = 16.0;
/// Largest accepted gap between a divisor series and its Euler product.
pub const SIGMA_MAX_GAP: f64 = 1e-6;
/// Length of the inverse-series convolution check.
pub const INVERSE_CHECK_TERMS: usize = 10;
/// Number of extensions sampled per genus for the inverse-series check.
pub const INVERSE_CHECK_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub body: Vec<u8>,
    pub summary: String,
    pub passed: bool,
}

/// Runs the configured command on a pool of `cfg.threads` workers.
pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?;
    pool.install(|| {
        let base = BaseField::from_order(cfg.p, cfg.r)?;
        match cfg.command {
            Command::Enumerate => enumerate(cfg, &base),
            Command::Lpoly => lpoly(cfg, &base),
            Command::Moment => moment(cfg, &base),
            Command::Verify => verify(cfg, &base),
            Command::Charsum => charsum(cfg, &base),
            Command::Sigma => sigma(cfg, &base),
        }
    })
}

fn count_summary(counts: &[(u32, usize)]) -> String {
    match counts {
        [(_, n)] => format!("count={n}"),
        _ => counts.iter().map(|(m, n)| format!("m={m} count={n}")).collect::<Vec<_>>().join(" "),
    }
}

fn enumerate(cfg: &RunConfig, base: &BaseField) -> CliResult<Outcome> {
    let mut rows = Vec::new();
    let mut counts = Vec::new();
    for m in cfg.ms() {
        let family = base.enumerate_family(m, cfg.cap)?;
        counts.push((m, family.len()));
        rows.extend(family.iter().map(ExtRecord::of));
    }
    Ok(Outcome { body: encode(&rows, cfg.format)?, summary: count_summary(&counts), passed: true })
}

/// The family of genus `m` and its L-polynomials, through the cache when one is configured.
pub fn family_lpolys(cfg: &RunConfig, base: &BaseField, m: u32) -> CliResult<(Vec<QuadExt>, Vec<LPolynomial>)> {
    let family = base.enumerate_family(m, cfg.cap)?;
    let omegas: Vec<String> = family.iter().map(|f| f.omega().to_string()).collect();
    if let Some(dir) = &cfg.cache_dir {
        if let Some(lpolys) = cache::load(dir, base.q(), m, &omegas) {
            return Ok((family, lpolys));
        }
    }
    let catalog = PlaceCatalog::new(base, 2 * m as usize);
    let lpolys: Vec<LPolynomial> = family.par_iter().map(|f| base.lstar_with_catalog(f, &catalog)).collect();
    if let Some(dir) = &cfg.cache_dir {
        cache::store(dir, base.q(), m, &omegas, &lpolys)?;
    }
    Ok((family, lpolys))
}

fn rh_deviations(lpolys: &[LPolynomial]) -> Vec<f64> {
    // a failed root search is reported as an infinite deviation
    lpolys.par_iter().map(|l| l.rh_deviation().unwrap_or(f64::INFINITY)).collect()
}

fn lpoly(cfg: &RunConfig, base: &BaseField) -> CliResult<Outcome> {
    let mut rows = Vec::new();
    let mut counts = Vec::new();
    for m in cfg.ms() {
        let (family, lpolys) = family_lpolys(cfg, base, m)?;
        let devs = rh_deviations(&lpolys);
        counts.push((m, family.len()));
        rows.extend(family.iter().zip(&lpolys).zip(&devs).map(|((f, l), &d)| LpolyRow::new(f, l, d)));
    }
    let worst = rows.iter().map(|r| r.rh_deviation).fold(0.0, f64::max);
    Ok(Outcome {
        body: encode(&rows, cfg.format)?,
        summary: format!("{} max_rh_deviation={worst:e}", count_summary(&counts)),
        passed: worst < RH_TOLERANCE,
    })
}

fn moment(cfg: &RunConfig, base: &BaseField) -> CliResult<Outcome> {
    base.check_region(cfg.kind, cfg.s, cfg.t, cfg.epsilon)?;
    let mut reports: Vec<MomentReport> = Vec::new();
    for m in cfg.ms() {
        let (_, lpolys) = family_lpolys(cfg, base, m)?;
        reports.push(base.error_report(cfg.kind, m, &lpolys, cfg.s, cfg.t, cfg.epsilon)?);
    }
    calibrate(&mut reports);
    let rows: Vec<MomentRow> = reports.iter().map(MomentRow::from).collect();
    let passed = reports.iter().all(|r| r.pass);
    let rel: Vec<String> = reports.iter().map(|r| format!("{:e}", r.rel_err())).collect();
    Ok(Outcome {
        body: encode(&rows, cfg.format)?,
        summary: format!("rows={} C={} rel_err=[{}] pass={passed}", rows.len(), reports[0].constant, rel.join(",")),
        passed,
    })
}

/// Closed-form family size: square-free counts for odd `q`, a totient sum for even `q`.
pub fn family_count_oracle(base: &BaseField, m: u32) -> CliResult<u128> {
    let q = base.q() as u128;
    if base.is_even() {
        let mut total = 0u128;
        for d in base.effective_divisors(m as usize + 1) {
            total += 2 * d.phi(base.q())? as u128;
        }
        Ok(total)
    } else {
        Ok(2 * (q.pow(2 * m + 2) - q.pow(2 * m)))
    }
}

/// `min(n, len)` evenly spaced indices below `len`.
fn sample_indices(len: usize, n: usize) -> impl Iterator<Item = usize> {
    let k = n.min(len);
    (0..k).map(move |i| i * len / k)
}

fn invariant_rows(base: &BaseField, m: u32, family: &[QuadExt], lpolys: &[LPolynomial]) -> CliResult<Vec<VerifyRow>> {
    let row = |check: &str, count: usize, failures: usize| VerifyRow { m, check: check.to_string(), count, failures };
    let mut rows = Vec::new();

    let expect = family_count_oracle(base, m)?;
    rows.push(row("family_count", 1, usize::from(family.len() as u128 != expect)));

    let devs = rh_deviations(lpolys);
    rows.push(row("rh_deviation", devs.len(), devs.iter().filter(|&&d| d.is_nan() || d >= RH_TOLERANCE).count()));

    let picks: Vec<usize> = sample_indices(family.len(), INVERSE_CHECK_SAMPLES).collect();
    let places = base.places_up_to(INVERSE_CHECK_TERMS);
    let bad = picks
        .par_iter()
        .filter(|&&i| {
            let inv = base.lstar_inverse_series_over(&family[i], &places, INVERSE_CHECK_TERMS);
            let prod = convolve(lpolys[i].coeffs(), &inv, INVERSE_CHECK_TERMS);
            prod.iter().enumerate().any(|(n, &c)| c != i64::from(n == 0))
        })
        .count();
    rows.push(row("inverse_series", picks.len(), bad));

    let odd: Vec<Divisor> = [1usize, 3].iter().flat_map(|&n| base.effective_divisors(n)).collect();
    let sums: Vec<i64> = odd.par_iter().map(|c| base.family_char_sum(family, c)).collect::<qext_core::Result<_>>()?;
    rows.push(row("odd_degree_char_sum", sums.len(), sums.iter().filter(|&&s| s != 0).count()));
    Ok(rows)
}

fn verify(cfg: &RunConfig, base: &BaseField) -> CliResult<Outcome> {
    let mut rows = Vec::new();
    for m in cfg.ms() {
        let report = base.identity_suite(m)?;
        for (name, count, failures) in report.tally() {
            rows.push(VerifyRow { m, check: name.to_string(), count, failures });
        }
        let (family, lpolys) = family_lpolys(cfg, base, m)?;
        rows.extend(invariant_rows(base, m, &family, &lpolys)?);
    }
    let checks: usize = rows.iter().map(|r| r.count).sum();
    let failures: usize = rows.iter().map(|r| r.failures).sum();
    Ok(Outcome {
        body: encode(&rows, cfg.format)?,
        summary: format!("checks={checks} failures={failures}"),
        passed: failures == 0,
    })
}

/// Effective divisors of degree `1..=max_degree` supported on finite places.
pub fn finite_moduli(base: &BaseField, max_degree: usize) -> Vec<Divisor> {
    (1..=max_degree)
        .flat_map(|n| base.effective_divisors(n))
        .filter(|c| !c.contains(&Place::Infinity))
        .collect()
}

fn charsum(cfg: &RunConfig, base: &BaseField) -> CliResult<Outcome> {
    let moduli = finite_moduli(base, cfg.max_degree);
    let sweeps: Vec<_> =
        moduli.par_iter().map(|c| charsum_sweep(base, c, 2, 2)).collect::<qext_core::Result<_>>()?;
    let all: Vec<_> = sweeps.into_iter().flatten().collect();
    let nonzero: usize = all.iter().map(|r| r.nonzero).sum();
    let worst = all.iter().filter(|r| !r.vanishing).map(|r| r.ratio).fold(0.0, f64::max);
    let rows: Vec<CharsumRecord> = all.iter().map(|r| CharsumRecord::new(base.q(), r)).collect();
    Ok(Outcome {
        body: encode(&rows, cfg.format)?,
        summary: format!("rows={} moduli={} max_C={worst} nonzero_vanishing={nonzero}", rows.len(), moduli.len()),
        passed: nonzero == 0 && worst <= CHARSUM_MAX_CONSTANT,
    })
}

fn sigma(cfg: &RunConfig, base: &BaseField) -> CliResult<Outcome> {
    let kinds = [SigmaKind::Sigma1, SigmaKind::Sigma2, SigmaKind::Sigma3];
    let rows: Vec<SigmaRow> = kinds
        .par_iter()
        .map(|&k| {
            let product = base.sigma_product(k, cfg.s, cfg.t, cfg.tol)?;
            let series = base.series_check(k, cfg.s, cfg.t, cfg.cutoff)?;
            Ok(SigmaRow::new(base.q(), &product, &series, SIGMA_MAX_GAP))
        })
        .collect::<qext_core::Result<_>>()?;
    let worst = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    Ok(Outcome {
        body: encode(&rows, cfg.format)?,
        summary: format!("max_gap={worst:e}"),
        passed: rows.iter().all(|r| r.pass),
    })
}

/// Settings map from `(key, value)` pairs.
pub fn settings(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v.to_string())).collect()
}
