//! End-to-end runs of the reduction from a noisy-oracle algorithm to plain
//! queries on `f ∘ GapMaj_t`.

use super::report::{Check, VerificationReport};
use crate::error::Result;
use crate::func::{zoo::GapMaj, PartialFn};
use crate::noisy::{
    gapmaj_input, input_rng, simulate_on_gapmaj, trial_seed, wilson_interval, MajorityVote, QueryRecord,
    SimulationSummary, Trial,
};
use rayon::prelude::*;
use std::time::Instant;

/// Bits read for a transcript: `t` per bias-1 query, 1 per other query.
pub fn transcript_reads(records: &[QueryRecord], t: usize) -> u64 {
    records.iter().map(|r| if r.gamma == 1.0 { t as u64 } else { 1 }).sum()
}

/// Majority vote over `9t + 1` queries of bias `1/√t` per variable.
pub fn default_algorithm(f: &PartialFn, t: usize) -> MajorityVote {
    MajorityVote {
        f: f.clone(),
        gamma_hat: 1.0 / (t as f64).sqrt(),
        repeats: 9 * t + 1,
    }
}

pub struct SimulationOutcome {
    pub report: VerificationReport,
    /// First trial of every domain input, as `(x, transcript)`.
    pub transcripts: Vec<(usize, Vec<QueryRecord>)>,
}

/// Runs `trials` seeded trials of [`default_algorithm`] on every input of
/// `Dom(f)`, each composed input drawn with blocks of the promised weights.
pub fn simulate_suite(name: &str, f: &PartialFn, t: usize, trials: usize, seed: u64) -> Result<SimulationOutcome> {
    GapMaj::new(t)?;
    let mut report = VerificationReport::new("simulate");
    let mut transcripts = Vec::new();
    if trials == 0 {
        return Ok(SimulationOutcome { report, transcripts });
    }
    let alg = default_algorithm(f, t);
    let n = f.arity();
    for x in f.domain() {
        let start = Instant::now();
        let expected = f.eval(x) == Some(true);
        let input = gapmaj_input(n, t, x, &mut input_rng(trial_seed(seed, usize::MAX - x)))?;
        let runs: Vec<Trial> = (0..trials)
            .into_par_iter()
            .map(|k| simulate_on_gapmaj(&alg, t, &input, trial_seed(seed, k), true))
            .collect::<Result<_>>()?;
        let successes = runs.iter().filter(|r| r.output == expected).count();
        let identity = runs.iter().all(|r| {
            r.composed_queries == t as u64 * r.full_block_queries + r.single_bit_queries
                && r.transcript.as_deref().map(|tr| transcript_reads(tr, t)) == Some(r.composed_queries)
        });
        let m = trials as f64;
        let summary = SimulationSummary {
            trials,
            successes,
            success_rate: successes as f64 / m,
            ci95: wilson_interval(successes, trials),
            mean_cost: runs.iter().map(|r| r.noisy_cost).sum::<f64>() / m,
            mean_composed_queries: runs.iter().map(|r| r.composed_queries as f64).sum::<f64>() / m,
        };
        let anchor = "noisy-to-plain reduction";
        report.push(
            Check::new(
                format!("{name}/t{t}/x{x:0w$b}-success", w = n.max(1)),
                anchor,
                "success rate at least 2/3",
            )
            .value("summary", &summary)
            .value("case", runs[0].case)
            .pass_if(summary.success_rate >= 2.0 / 3.0)
            .timed(start),
        );
        report.push(
            Check::new(
                format!("{name}/t{t}/x{x:0w$b}-queries", w = n.max(1)),
                anchor,
                "composed reads = t * bias-1 queries + single-bit queries on every transcript",
            )
            .value("mean_composed_queries", summary.mean_composed_queries)
            .pass_if(identity),
        );
        if let Some(tr) = runs.into_iter().next().and_then(|r| r.transcript) {
            transcripts.push((x, tr));
        }
    }
    Ok(SimulationOutcome {
        report: report.finish(),
        transcripts,
    })
}
