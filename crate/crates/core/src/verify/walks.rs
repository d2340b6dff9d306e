//! Exact and Monte-Carlo checks of the noisy-oracle machinery: majority
//! amplification bounds, walk durations, the conditioned-walk law and the
//! generated bit stream.

use super::report::{Check, Status, VerificationReport};
use crate::error::{Error, Result};
use crate::noisy::{
    conditioned_prefix_law, generate_biased_bits, mu_ratio_check, sample_conditioned_walk,
    transcript_text, walk_length, NoisyOracle, QueryOracle, Streams, WalkParams, MAX_GAMMA_HAT,
};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use std::collections::HashMap;
use std::time::Instant;

/// 99.73% quantile of χ² with 3 degrees of freedom.
pub const CHI2_3_THREE_SIGMA: f64 = 14.16;

#[derive(Debug, Clone)]
pub struct WalksConfig {
    pub gamma_hats: Vec<f64>,
    pub ts: Vec<usize>,
    /// Walks per cell for the mean-length check.
    pub walks: usize,
    /// Samples for the conditioned prefix law.
    pub prefix_samples: usize,
    /// Length of the generated bit stream.
    pub bits: usize,
    pub seed: u64,
}

impl Default for WalksConfig {
    fn default() -> Self {
        Self {
            gamma_hats: vec![0.02, 0.05, 0.1],
            ts: vec![4, 16, 64],
            walks: 100_000,
            prefix_samples: 100_000,
            bits: 1_000_000,
            seed: 1,
        }
    }
}

/// For `γ = num/den`: every odd `k ≤ ⌊1/γ²⌋` with the majority bias `γ′`
/// and whether `√k·γ/3 ≤ γ′ ≤ 3√k·γ`.
///
/// Exact in integers: with `a = den + num`, `b = den - num`,
/// `S = ∑_{j>k/2} C(k,j) a^j b^(k-j)` and `D = (2·den)^k`, `γ′ = (2S - D)/D`,
/// and both bounds are compared on cross-multiplied squares.
pub fn amplification_bounds(num: i64, den: i64) -> Result<Vec<(usize, f64, bool)>> {
    if num <= 0 || den <= num {
        return Err(Error::InvalidArgument(format!("bias {num}/{den} outside (0, 1)")));
    }
    let (a, b) = (BigInt::from(den + num), BigInt::from(den - num));
    let two_den = BigInt::from(2 * den);
    let (num2, den2) = (BigInt::from(num * num), BigInt::from(den * den));
    let k_max = (den * den / (num * num)) as usize;
    (1..=k_max)
        .step_by(2)
        .map(|k| {
            let mut binom = BigInt::one();
            let mut sum = BigInt::zero();
            for j in 0..=k {
                if 2 * j > k {
                    sum += &binom * a.pow(j as u32) * b.pow((k - j) as u32);
                }
                binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
            }
            let d = two_den.pow(k as u32);
            let top = BigInt::from(2) * sum - &d;
            let kk = BigInt::from(k);
            let lhs = &top * &top * &den2;
            let rhs = &kk * &num2 * &d * &d;
            let ok = top > BigInt::zero() && BigInt::from(9) * &lhs >= rhs && lhs <= BigInt::from(9) * &rhs;
            let value = Rational::new(top, d);
            Ok((k, crate::scalar::Scalar::to_f64_lossy(&value), ok))
        })
        .collect()
}

fn mean_sd(xs: impl Iterator<Item = f64>) -> (f64, f64, usize) {
    let v: Vec<f64> = xs.collect();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt(), v.len())
}

/// z-score of the ones and χ² of non-overlapping lag-1 pairs against
/// i.i.d. Bernoulli(p).
pub fn stream_stats(bits: &[bool], p: f64) -> (f64, f64) {
    let n = bits.len() as f64;
    let ones = bits.iter().filter(|&&b| b).count() as f64;
    let z = (ones - n * p) / (n * p * (1.0 - p)).sqrt();
    let mut pairs = [0f64; 4];
    for w in bits.chunks_exact(2) {
        pairs[(w[0] as usize) << 1 | w[1] as usize] += 1.0;
    }
    let m = (bits.len() / 2) as f64;
    let probs = [(1.0 - p) * (1.0 - p), (1.0 - p) * p, p * (1.0 - p), p * p];
    let chi2 = pairs.iter().zip(probs).map(|(o, q)| (o - m * q).powi(2) / (m * q)).sum();
    (z, chi2)
}

#[derive(Debug, Clone, Serialize)]
pub struct PrefixFit {
    pub cells: usize,
    /// Cells outside 3σ of the exact probability.
    pub outside: usize,
    pub worst_z: f64,
}

/// Compares sampled walk prefixes with the exact conditioned law.
pub fn prefix_fit(gamma_hat: f64, big_t: u64, len: usize, samples: usize, rng: &mut impl Rng) -> Result<PrefixFit> {
    let law = conditioned_prefix_law(gamma_hat, big_t, len)?;
    let mut counts: HashMap<Vec<bool>, usize> = HashMap::new();
    for _ in 0..samples {
        let mut w = sample_conditioned_walk(gamma_hat, big_t, true, rng)?;
        w.truncate(len);
        *counts.entry(w).or_default() += 1;
    }
    let n = samples as f64;
    let mut outside = 0;
    let mut worst_z = 0.0f64;
    for (path, p) in &law {
        let observed = counts.remove(path).unwrap_or(0) as f64;
        let sd = (n * p * (1.0 - p)).sqrt();
        let z = if sd > 0.0 { (observed - n * p) / sd } else { 0.0 };
        worst_z = worst_z.max(z.abs());
        outside += (z.abs() > 3.0) as usize;
    }
    // A sampled prefix the law gives no mass to.
    outside += counts.len();
    Ok(PrefixFit {
        cells: law.len(),
        outside,
        worst_z,
    })
}

/// Transcript text of `queries` noisy queries on a fixed input.
fn replay(seed: u64, queries: usize) -> Result<String> {
    let mut oracle = NoisyOracle::from_index(4, 0b1010, seed).with_transcript();
    for q in 0..queries {
        oracle.query(q % 4, [1.0, 0.5, 0.1][q % 3])?;
    }
    Ok(transcript_text(oracle.transcript().unwrap_or(&[])))
}

pub fn walks_suite(cfg: &WalksConfig) -> Result<VerificationReport> {
    if let Some(&g) = cfg.gamma_hats.iter().find(|&&g| !(g > 0.0 && g <= MAX_GAMMA_HAT)) {
        return Err(Error::InvalidArgument(format!(
            "walk bias {g} outside (0, {MAX_GAMMA_HAT}]"
        )));
    }
    if cfg.ts.iter().any(|&t| t == 0) {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    let streams = Streams::new(cfg.seed);
    let mut r = VerificationReport::new("walks");

    for (num, den) in [(1, 20), (1, 10), (1, 5)] {
        let start = Instant::now();
        let rows = amplification_bounds(num, den)?;
        let bad: Vec<usize> = rows.iter().filter(|r| !r.2).map(|r| r.0).collect();
        r.push(
            Check::new(
                format!("amplify/gamma-{num}-{den}"),
                "majority amplification bounds",
                "sqrt(k) gamma/3 <= gamma' <= 3 sqrt(k) gamma for odd k <= 1/gamma^2, exact",
            )
            .value("gamma", num as f64 / den as f64)
            .value("k_max", rows.last().map_or(0, |r| r.0))
            .value("violations", &bad)
            .pass_if(bad.is_empty())
            .timed(start),
        );
    }

    let mut cell = 0;
    for &g in &cfg.gamma_hats {
        let mut costs = Vec::new();
        for &t in &cfg.ts {
            let name = format!("g{g}-t{t:03}");
            let big_t = walk_length(g, t);
            if big_t == 0 {
                r.push(
                    Check::new(format!("mu/{name}"), "walk duration ratio", "T = 0: cell rejected")
                        .value("gamma_hat", g)
                        .value("t", t)
                        .value("T", 0)
                        .status(Status::Recorded),
                );
                continue;
            }
            let start = Instant::now();
            let m = mu_ratio_check(g, t)?;
            r.push(
                Check::new(format!("mu/{name}"), "walk duration ratio", "mu_2T <= 12 mu_T by closed form")
                    .value("gamma_hat", g)
                    .value("t", t)
                    .value("T", m.big_t)
                    .value("mu_T", m.mu_t)
                    .value("mu_2T", m.mu_2t)
                    .value("ratio", m.ratio)
                    .value("c0", m.c0)
                    .pass_if(m.holds),
            );
            let mut rng = streams.stream(5, cell);
            cell += 1;
            let lens = (0..cfg.walks)
                .map(|_| sample_conditioned_walk(g, big_t, true, &mut rng).map(|w| w.len()))
                .collect::<Result<Vec<_>>>()?;
            let (mean, sd, _) = mean_sd(lens.iter().map(|&l| l as f64));
            let z = if sd > 0.0 { (mean - m.mu_t) / sd } else { 0.0 };
            r.push(
                Check::new(
                    format!("mu/{name}-mc"),
                    "walk duration ratio",
                    "mean conditioned walk length within 3 sigma of mu_T",
                )
                .value("walks", cfg.walks)
                .value("mean", mean)
                .value("mu_T", m.mu_t)
                .value("z", z)
                .value("min_length_at_least_T", lens.iter().all(|&l| l as u64 >= big_t))
                .tolerance(3.0)
                .pass_if(z.abs() <= 3.0 && lens.iter().all(|&l| l as u64 >= big_t))
                .timed(start),
            );
            if g <= MAX_GAMMA_HAT {
                let p = WalkParams::new(g, t)?;
                let c = p.delta_ratio();
                r.push(
                    Check::new(
                        format!("delta/{name}"),
                        "low-bias coin",
                        "0 < delta' < 1, with C = delta' sqrt(t) recorded",
                    )
                    .value("delta", p.delta)
                    .value("C", c)
                    .value("cost_per_bit", p.cost_per_bit())
                    .pass_if(p.delta > 0.0 && p.delta < 1.0),
                );
                costs.push(p.cost_per_bit());
            }
        }
        r.push(
            Check::new(
                format!("cost/g{g}"),
                "generator cost per bit",
                "closed-form cost per generated bit over t, recorded",
            )
            .value("ts", &cfg.ts)
            .value("cost_per_bit", &costs)
            .value("finite", costs.iter().all(|c| c.is_finite()))
            .value("decreasing", costs.windows(2).all(|w| w[1] < w[0]))
            .status(Status::Recorded),
        );
    }

    let start = Instant::now();
    let mut rng = streams.stream(6, 0);
    let fit = prefix_fit(0.2, 2, 6, cfg.prefix_samples, &mut rng)?;
    r.push(
        Check::new(
            "sampling/prefix-law",
            "conditioned walk law",
            "prefixes of length <= 6 at (0.2, T=2) within 3 sigma of path enumeration",
        )
        .value("samples", cfg.prefix_samples)
        .value("cells", fit.cells)
        .value("outside", fit.outside)
        .value("worst_z", fit.worst_z)
        .tolerance(3.0)
        .pass_if(fit.outside == 0)
        .timed(start),
    );

    let start = Instant::now();
    let (g, t) = (0.05, 16);
    let params = WalkParams::new(g, t)?;
    let mut oracle = NoisyOracle::from_index(1, 1, cfg.seed);
    let mut rng = streams.stream(6, 1);
    let out = generate_biased_bits(params, &mut oracle, 0, cfg.bits, &mut rng)?;
    let p = (1.0 + g) / 2.0;
    let (z, chi2) = stream_stats(&out.bits, p);
    let direct: Vec<bool> = (0..out.bits.len()).map(|_| rng.gen::<f64>() < p).collect();
    let (zd, chi2d) = stream_stats(&direct, p);
    let min_ok = out.walk_lengths.iter().all(|&l| l as u64 >= params.big_t);
    r.push(
        Check::new(
            "sampling/marginal",
            "generated bit stream",
            "bias of generated bits within 3 sigma of gamma_hat, lag-1 chi^2 below its 3 sigma quantile",
        )
        .value("gamma_hat", g)
        .value("t", t)
        .value("bits", out.bits.len())
        .value("walks", out.walk_lengths.len())
        .value("z", z)
        .value("chi2", chi2)
        .value("direct_z", zd)
        .value("direct_chi2", chi2d)
        .value("cost_per_bit", out.cost_per_bit())
        .value("cost_per_bit_closed_form", params.cost_per_bit())
        .tolerance(3.0)
        .pass_if(z.abs() <= 3.0 && chi2 <= CHI2_3_THREE_SIGMA && min_ok)
        .timed(start),
    );

    let a = replay(cfg.seed, 200)?;
    let b = replay(cfg.seed, 200)?;
    r.push(
        Check::new("sampling/replay", "seeded replay", "the same seed gives the same transcript")
            .value("lines", a.lines().count())
            .pass_if(a == b),
    );
    Ok(r.finish())
}
