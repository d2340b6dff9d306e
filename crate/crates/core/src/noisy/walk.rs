//! Biased random walks on `{-T, …, T}` and the bit generator built on them.

use super::oracle::{mix_down, QueryOracle, Streams, PURPOSE_BRIDGE};
use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

/// Step budget for one conditioned walk, retries included.
pub const STEP_CAP: u64 = 10_000_000;

/// Largest admissible low bias.
pub const MAX_GAMMA_HAT: f64 = 0.1;

/// `⌊1/(5√t γ̂)⌋`. Values within `1e-9` (relative) of an integer are taken
/// to be that integer, so that exact cases such as `γ̂ = 0.02, t = 4` are not
/// lost to rounding.
pub fn walk_length(gamma_hat: f64, t: usize) -> u64 {
    let x = 1.0 / (5.0 * (t as f64).sqrt() * gamma_hat);
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        x.floor() as u64
    }
}

/// Parameters of the bit generator for low bias `γ̂` and block size `t`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WalkParams {
    pub gamma_hat: f64,
    pub t: usize,
    /// Absorbing barriers at `±T`.
    #[serde(rename = "T")]
    pub big_t: u64,
    /// `((1+γ̂)/(1-γ̂))^T`
    pub r: f64,
    /// `(R-1)/(R+1)`, the bias of the coin picking the exit side.
    pub delta: f64,
}

impl WalkParams {
    pub fn new(gamma_hat: f64, t: usize) -> Result<Self> {
        if !(gamma_hat > 0.0 && gamma_hat <= MAX_GAMMA_HAT) {
            return Err(Error::InvalidArgument(format!(
                "low bias {gamma_hat} outside (0, {MAX_GAMMA_HAT}]"
            )));
        }
        if t == 0 {
            return Err(Error::InvalidArgument("t must be positive".into()));
        }
        let big_t = walk_length(gamma_hat, t);
        if big_t == 0 {
            return Err(Error::InvalidArgument(format!(
                "T = 0 for bias {gamma_hat} and t = {t}"
            )));
        }
        let r = ((1.0 + gamma_hat) / (1.0 - gamma_hat)).powi(big_t as i32);
        // (R-1)/(R+1) = tanh(T·atanh γ̂), without cancellation.
        let delta = (big_t as f64 * gamma_hat.atanh()).tanh();
        let p = Self {
            gamma_hat,
            t,
            big_t,
            r,
            delta,
        };
        if !(delta > 0.0 && delta < 1.0) || p.delta_ratio() > 1.0 {
            return Err(Error::InvalidArgument(format!(
                "coin bias {delta} not below 1/sqrt(t) for t = {t}"
            )));
        }
        Ok(p)
    }

    /// `δ′·√t`: the fraction of a `1/√t`-bias bit kept when making the
    /// side coin.
    pub fn delta_ratio(&self) -> f64 {
        self.delta * (self.t as f64).sqrt()
    }

    /// Expected bits per walk.
    pub fn mu(&self) -> f64 {
        mu_t(self.gamma_hat, self.big_t)
    }

    /// Expected ledger cost per generated bit: one `1/√t` query per walk.
    pub fn cost_per_bit(&self) -> f64 {
        1.0 / (self.t as f64 * self.mu())
    }
}

/// Expected duration of a `γ̂`-biased walk from 0 absorbed at `±T`,
/// `(T/γ̂)·((1+γ̂)^T - (1-γ̂)^T)/((1+γ̂)^T + (1-γ̂)^T)`. Conditioning on the
/// exit side does not change it.
pub fn mu_t(gamma_hat: f64, big_t: u64) -> f64 {
    let t = big_t as f64;
    (t / gamma_hat) * (t * gamma_hat.atanh()).tanh()
}

/// The duration formula in its expanded form, kept for cross-checks.
pub fn mu_t_expanded(gamma_hat: f64, big_t: u64) -> f64 {
    let t = big_t as i32;
    let a = (1.0 + gamma_hat).powi(t);
    let b = (1.0 - gamma_hat).powi(t);
    let tt = big_t as f64;
    tt / gamma_hat - (2.0 * tt / gamma_hat) * b * ((a - b) / (a * a - b * b))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MuRatio {
    pub gamma_hat: f64,
    pub t: usize,
    #[serde(rename = "T")]
    pub big_t: u64,
    pub mu_t: f64,
    pub mu_2t: f64,
    pub ratio: f64,
    pub holds: bool,
    /// `μ_T·tγ̂²`, the constant in the `Ω(1/(tγ̂²))` lower bound.
    pub c0: f64,
}

/// `μ_T`, `μ_2T` and whether `μ_2T ≤ 12 μ_T`, with `T` set from `t`.
pub fn mu_ratio_check(gamma_hat: f64, t: usize) -> Result<MuRatio> {
    if !(gamma_hat > 0.0 && gamma_hat < 1.0) {
        return Err(Error::InvalidArgument(format!("bias {gamma_hat} outside (0, 1)")));
    }
    let big_t = walk_length(gamma_hat, t);
    if big_t == 0 {
        return Err(Error::InvalidArgument(format!(
            "T = 0 for bias {gamma_hat} and t = {t}"
        )));
    }
    let m1 = mu_t(gamma_hat, big_t);
    let m2 = mu_t(gamma_hat, 2 * big_t);
    Ok(MuRatio {
        gamma_hat,
        t,
        big_t,
        mu_t: m1,
        mu_2t: m2,
        ratio: m2 / m1,
        holds: m2 <= 12.0 * m1,
        c0: m1 * t as f64 * gamma_hat * gamma_hat,
    })
}

fn check_walk(gamma_hat: f64, big_t: u64) -> Result<()> {
    if !(gamma_hat > 0.0 && gamma_hat < 1.0) {
        return Err(Error::InvalidArgument(format!("bias {gamma_hat} outside (0, 1)")));
    }
    if big_t == 0 {
        return Err(Error::InvalidArgument("walk barrier must be positive".into()));
    }
    Ok(())
}

/// Runs a walk with `Pr[+1] = p_up` until it leaves `(-T, T)`. Returns the
/// steps (`true` for `+1`) and whether it exited at `+T`.
fn run_walk(p_up: f64, big_t: u64, rng: &mut impl Rng, budget: &mut u64) -> Result<(Vec<bool>, bool)> {
    let bound = big_t as i64;
    let mut pos = 0i64;
    let mut steps = Vec::new();
    while pos.abs() < bound {
        if *budget == 0 {
            return Err(Error::StepCap(STEP_CAP));
        }
        *budget -= 1;
        let up = rng.gen::<f64>() < p_up;
        pos += if up { 1 } else { -1 };
        steps.push(up);
    }
    Ok((steps, pos > 0))
}

/// A walk of a `γ̂`-biased coin (`+1` with probability `(1+γ̂)/2`) from 0,
/// stopped at `±T`, drawn conditionally on leaving at `+T` (`up`) or `-T`.
///
/// Each path ending at `±T` has the same probability ratio under bias `γ̂`
/// and `-γ̂`, so both biases give the same conditional law. The sampler
/// walks with drift towards the target side, where the conditioning event
/// has probability `R/(R+1) ≥ 1/2`, and retries walks that exit on the
/// other side.
pub fn sample_conditioned_walk(gamma_hat: f64, big_t: u64, up: bool, rng: &mut impl Rng) -> Result<Vec<bool>> {
    check_walk(gamma_hat, big_t)?;
    let p_up = if up { (1.0 + gamma_hat) / 2.0 } else { (1.0 - gamma_hat) / 2.0 };
    let mut budget = STEP_CAP;
    loop {
        let (steps, exit_up) = run_walk(p_up, big_t, rng, &mut budget)?;
        if exit_up == up {
            return Ok(steps);
        }
    }
}

/// Plain rejection sampling from the `+γ̂` walk, for cross-checks at small
/// `T` (exponentially slow for `-T` targets at large `T`).
pub fn sample_conditioned_walk_rejection(
    gamma_hat: f64,
    big_t: u64,
    up: bool,
    rng: &mut impl Rng,
) -> Result<Vec<bool>> {
    check_walk(gamma_hat, big_t)?;
    let mut budget = STEP_CAP;
    loop {
        let (steps, exit_up) = run_walk((1.0 + gamma_hat) / 2.0, big_t, rng, &mut budget)?;
        if exit_up == up {
            return Ok(steps);
        }
    }
}

/// Buffered per-position generator of `γ̂`-biased bits from `1/√t`-bias
/// queries. One walk costs one query; its steps are emitted as bits, and
/// bits left over after a demand is met stay buffered for later demands.
#[derive(Debug, Clone)]
pub struct BiasedBitSource {
    params: WalkParams,
    buffers: Vec<VecDeque<bool>>,
    rngs: Vec<ChaCha8Rng>,
    walks: u64,
    generated: u64,
}

impl BiasedBitSource {
    pub fn new(params: WalkParams, positions: usize, streams: &Streams) -> Self {
        Self {
            params,
            buffers: vec![VecDeque::new(); positions],
            rngs: (0..positions).map(|i| streams.stream(PURPOSE_BRIDGE, i)).collect(),
            walks: 0,
            generated: 0,
        }
    }

    pub fn params(&self) -> &WalkParams {
        &self.params
    }

    pub fn walks(&self) -> u64 {
        self.walks
    }

    /// Bits produced so far, consumed or buffered.
    pub fn generated(&self) -> u64 {
        self.generated
    }

    pub fn buffered(&self, i: usize) -> usize {
        self.buffers[i].len()
    }

    /// Runs one walk for position `i` and buffers its bits.
    fn refill(&mut self, oracle: &mut dyn QueryOracle, i: usize) -> Result<()> {
        let p = self.params;
        let rng = &mut self.rngs[i];
        let raw = oracle.query(i, 1.0 / (p.t as f64).sqrt())?;
        let side = mix_down(raw, p.delta_ratio(), rng);
        let steps = sample_conditioned_walk(p.gamma_hat, p.big_t, side, rng)?;
        self.walks += 1;
        self.generated += steps.len() as u64;
        self.buffers[i].extend(steps);
        Ok(())
    }

    /// The next `γ̂`-biased bit for position `i`.
    pub fn next_bit(&mut self, oracle: &mut dyn QueryOracle, i: usize) -> Result<bool> {
        if self.buffers[i].is_empty() {
            self.refill(oracle, i)?;
        }
        Ok(self.buffers[i].pop_front().expect("a walk has at least T >= 1 steps"))
    }
}

/// Output of [`generate_biased_bits`].
#[derive(Debug, Clone)]
pub struct GeneratedBits {
    pub bits: Vec<bool>,
    pub walk_lengths: Vec<usize>,
    /// Ledger growth while generating.
    pub cost: f64,
}

impl GeneratedBits {
    pub fn cost_per_bit(&self) -> f64 {
        self.cost / self.bits.len() as f64
    }
}

/// Runs whole walks for position `i` until at least `count` bits exist.
pub fn generate_biased_bits(
    params: WalkParams,
    oracle: &mut dyn QueryOracle,
    i: usize,
    count: usize,
    rng: &mut impl Rng,
) -> Result<GeneratedBits> {
    let start = oracle.cost();
    let keep = params.delta_ratio();
    let q = 1.0 / (params.t as f64).sqrt();
    let mut bits = Vec::with_capacity(count);
    let mut walk_lengths = Vec::new();
    while bits.len() < count {
        let side = mix_down(oracle.query(i, q)?, keep, rng);
        let steps = sample_conditioned_walk(params.gamma_hat, params.big_t, side, rng)?;
        walk_lengths.push(steps.len());
        bits.extend(steps);
    }
    Ok(GeneratedBits {
        bits,
        walk_lengths,
        cost: oracle.cost() - start,
    })
}

/// Exact law of the first `len` steps of the walk conditioned on exiting at
/// `+T`, as `(prefix, probability)` pairs in lexicographic order. A prefix
/// shorter than `len` is a complete walk.
pub fn conditioned_prefix_law(gamma_hat: f64, big_t: u64, len: usize) -> Result<Vec<(Vec<bool>, f64)>> {
    check_walk(gamma_hat, big_t)?;
    let b = big_t as i64;
    let p = (1.0 + gamma_hat) / 2.0;
    let rho = (1.0 - p) / p;
    // Probability of exiting at +T from position z.
    let exit_up = |z: i64| (1.0 - rho.powi((z + b) as i32)) / (1.0 - rho.powi((2 * b) as i32));
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), 0i64, 1.0f64)];
    while let Some((path, z, pr)) = stack.pop() {
        if z == -b {
            continue;
        }
        if z == b || path.len() == len {
            out.push((path, pr * exit_up(z) / exit_up(0)));
            continue;
        }
        for up in [false, true] {
            let mut next = path.clone();
            next.push(up);
            stack.push((next, z + if up { 1 } else { -1 }, pr * if up { p } else { 1.0 - p }));
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}
