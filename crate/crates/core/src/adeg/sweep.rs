use super::feasibility::{adeg_feasible_with, Approximation};
use crate::error::Result;
use crate::func::{Limits, TruthTable};
use rayon::prelude::*;
use std::time::Instant;

/// One row of a degree sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub d: usize,
    pub lp_error: f64,
    pub feasible: bool,
    pub wall_time_ms: f64,
}

pub const SWEEP_CSV_HEADER: &str = "n,d*,lp_error,wall_time";

/// Solves the adeg LP at every degree `0..=n` in parallel.
pub fn degree_sweep(limits: &Limits, f: &TruthTable, eps: f64) -> Result<Vec<SweepRow>> {
    limits.check(f.arity())?;
    (0..=f.arity())
        .into_par_iter()
        .map(|d| {
            let start = Instant::now();
            let a: Approximation<f64> = adeg_feasible_with(limits, f, d, eps)?;
            Ok(SweepRow {
                n: f.arity(),
                d,
                lp_error: a.error,
                feasible: a.feasible,
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

/// Whether feasibility never switches off as the degree grows.
pub fn is_monotone(rows: &[SweepRow]) -> bool {
    rows.windows(2).all(|w| !w[0].feasible || w[1].feasible)
}

/// CSV lines `n,d*,lp_error,wall_time`, one per function: the minimal
/// feasible degree, its LP error and the summed solve time in seconds.
pub fn sweep_csv(sweeps: &[Vec<SweepRow>]) -> String {
    let mut out = format!("{SWEEP_CSV_HEADER}\n");
    for rows in sweeps {
        let Some(first) = rows.iter().find(|r| r.feasible) else { continue };
        let secs: f64 = rows.iter().map(|r| r.wall_time_ms).sum::<f64>() / 1e3;
        out.push_str(&format!("{},{},{:.9},{:.6}\n", first.n, first.d, first.lp_error, secs));
    }
    out
}
