//! Symmetric and junta-symmetric functions: the Paturi band on measured
//! approximate degrees, and the restriction lower bound for junta-symmetric
//! functions.

use super::report::{Check, Status, VerificationReport};
use crate::adeg::{adeg_symmetric, adeg_witness};
use crate::error::{Error, Result};
use crate::func::{JuntaSymmetricSpec, Limits, SymmetricSpectrum};
use crate::measures::paturi_gamma;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

/// Accepted range of `adeg / √(n(γ+1))`.
pub const PATURI_BAND: (f64, f64) = (0.2, 3.0);

#[derive(Debug, Clone, Serialize)]
pub struct BandRow {
    /// Spectrum bits, bit `w` the value at weight `w`.
    pub bits: u64,
    pub adeg: usize,
    pub gamma: usize,
    pub ratio: f64,
}

/// Measures every non-constant total symmetric function on `n` bits.
pub fn paturi_rows(limits: &Limits, n: usize, eps: f64) -> Result<Vec<BandRow>> {
    limits.check(n)?;
    (0..1u64 << (n + 1))
        .into_par_iter()
        .filter_map(|bits| {
            let spec = SymmetricSpectrum::from_bits(n, bits);
            if spec.is_constant() {
                return None;
            }
            Some((|| {
                let adeg = adeg_symmetric(limits, &spec, eps)?;
                let gamma = paturi_gamma(&spec)?;
                Ok(BandRow {
                    bits,
                    adeg,
                    gamma,
                    ratio: adeg as f64 / ((n * (gamma + 1)) as f64).sqrt(),
                })
            })())
        })
        .collect()
}

pub fn paturi_band(limits: &Limits, n_max: usize, eps: f64) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("symmetric");
    for n in 1..=n_max {
        let start = Instant::now();
        let rows = paturi_rows(limits, n, eps)?;
        let ratios = rows.iter().map(|r| r.ratio);
        let min = ratios.clone().fold(f64::INFINITY, f64::min);
        let max = ratios.fold(f64::NEG_INFINITY, f64::max);
        let outside = rows
            .iter()
            .filter(|r| !(PATURI_BAND.0..=PATURI_BAND.1).contains(&r.ratio))
            .count();
        r.push(
            Check::new(
                format!("band/n{n:02}"),
                "symmetric approximate degree band",
                "adeg/sqrt(n(gamma+1)) within the band for every non-constant symmetric f",
            )
            .value("n", n)
            .value("functions", rows.len())
            .value("min_ratio", min)
            .value("max_ratio", max)
            .value("outside", outside)
            .value("band", PATURI_BAND)
            .value("adeg_by_spectrum", rows.iter().map(|r| (r.bits, r.adeg)).collect::<Vec<_>>())
            .pass_if(outside == 0)
            .timed(start),
        );
    }
    Ok(r.finish())
}

#[derive(Debug, Clone, Serialize)]
pub struct JuntaRestriction {
    pub assignment: usize,
    /// Fixing the junta gives the function of `restricted_spectrum`.
    pub matches_spectrum: bool,
    /// `None` for a constant restriction.
    pub adeg_restricted: Option<usize>,
    pub gamma: Option<usize>,
}

/// The restriction facts of a junta-symmetric function.
pub fn junta_restrictions(limits: &Limits, spec: &JuntaSymmetricSpec, eps: f64) -> Result<(usize, Vec<JuntaRestriction>)> {
    let f = spec.to_fn()?;
    let Some(total) = f.to_total() else {
        return Err(Error::InvalidArgument("the junta study needs a total function".into()));
    };
    let adeg_f = adeg_witness(limits, &total, eps)?.degree;
    let rows = (0..spec.table().len())
        .map(|a| {
            let fix: BTreeMap<usize, bool> = spec
                .junta()
                .iter()
                .enumerate()
                .map(|(j, &v)| (v, a >> j & 1 == 1))
                .collect();
            let restricted = spec.restricted_spectrum(a);
            let matches_spectrum = f.restrict(&fix)? == restricted.to_fn()?;
            let (adeg_restricted, gamma) = if restricted.is_constant() {
                (None, None)
            } else {
                (
                    Some(adeg_symmetric(limits, &restricted, eps)?),
                    Some(paturi_gamma(&restricted)?),
                )
            };
            Ok(JuntaRestriction {
                assignment: a,
                matches_spectrum,
                adeg_restricted,
                gamma,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((adeg_f, rows))
}

pub fn junta_study(name: &str, limits: &Limits, spec: &JuntaSymmetricSpec, eps: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let anchor = "junta-symmetric restriction bound";
    let (adeg_f, rows) = junta_restrictions(limits, spec, eps)?;
    let n = spec.arity();
    let k = spec.junta().len();
    let mut r = VerificationReport::new("symmetric");
    for row in &rows {
        let a = row.assignment;
        r.push(
            Check::new(
                format!("junta/{name}/a{a}-spectrum"),
                anchor,
                "fixing the junta leaves the restricted symmetric function",
            )
            .pass_if(row.matches_spectrum),
        );
        let c = Check::new(format!("junta/{name}/a{a}-adeg"), anchor, "adeg(f) >= adeg(restriction)")
            .value("adeg_f", adeg_f)
            .value("adeg_restricted", row.adeg_restricted)
            .value("gamma", row.gamma);
        r.push(match row.adeg_restricted {
            Some(d) => c.pass_if(adeg_f >= d),
            None => c.value("skipped", "constant restriction").status(Status::Recorded),
        });
    }
    let gamma_max = rows.iter().filter_map(|r| r.gamma).max();
    let bound = gamma_max.map(|g| (k as f64).max(((n - k) as f64 * g as f64).sqrt()));
    r.push(
        Check::new(
            format!("junta/{name}/bound"),
            anchor,
            "adeg(f) against max{k, sqrt((n-k) gamma_max)}",
        )
        .value("n", n)
        .value("k", k)
        .value("strong", spec.is_strong())
        .value("adeg_f", adeg_f)
        .value("gamma_max", gamma_max)
        .value("bound", bound)
        .value("ratio", bound.map(|b| adeg_f as f64 / b))
        .status(Status::Recorded)
        .timed(start),
    );
    Ok(r.finish())
}

/// A strongly 1-junta-symmetric function on 5 bits: majority of the weight
/// when variable 0 is 0, parity of the weight when it is 1.
pub fn example_junta() -> JuntaSymmetricSpec {
    let maj = SymmetricSpectrum::total(&[false, false, false, true, true, true]).expect("length 6");
    let parity = SymmetricSpectrum::total(&[false, true, false, true, false, true]).expect("length 6");
    JuntaSymmetricSpec::new(5, vec![0], vec![maj, parity]).expect("valid junta spec")
}

/// Band check up to `n_max` and the junta example.
pub fn symmetric_suite(limits: &Limits, n_max: usize, eps: f64) -> Result<VerificationReport> {
    let mut r = paturi_band(limits, n_max, eps)?;
    r.extend(junta_study("example", limits, &example_junta(), eps)?);
    Ok(r.finish())
}
