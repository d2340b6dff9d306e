//! Turning a noisy-oracle algorithm for `f` into a plain query algorithm
//! for `f ∘ GapMaj_t`.
//!
//! Three layers: the algorithm queries biases `{1, γ̂}`; a bridge serves
//! them from biases `{1, 1/√t}` (majority and mixing when `γ̂` is large,
//! the walk generator when it is small); the block oracle answers those by
//! reading the composed input, all `t` bits of a block for bias 1 and one
//! random bit, mixed down from bias `4/√t`, for bias `1/√t`.

use super::amplify::{amplify_bias_sample, majority_size_for};
use super::oracle::{mix_down, QueryOracle, QueryRecord, Streams, PURPOSE_BLOCK, PURPOSE_MIX};
use super::walk::{walk_length, BiasedBitSource, WalkParams, MAX_GAMMA_HAT};
use crate::error::{Error, Result};
use crate::func::zoo::GapMaj;
use crate::func::PartialFn;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// A decision procedure over a noisy oracle using only biases 1 and
/// [`gamma_hat`](NoisyAlgorithm::gamma_hat).
pub trait NoisyAlgorithm: Sync {
    fn arity(&self) -> usize;

    fn gamma_hat(&self) -> f64;

    fn run(&self, oracle: &mut dyn QueryOracle) -> Result<bool>;
}

/// Rejects any bias other than 1 and `γ̂`.
pub struct NormalForm<'a> {
    inner: &'a mut dyn QueryOracle,
    gamma_hat: f64,
    queries: u64,
}

impl<'a> NormalForm<'a> {
    pub fn new(inner: &'a mut dyn QueryOracle, gamma_hat: f64) -> Self {
        Self {
            inner,
            gamma_hat,
            queries: 0,
        }
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }
}

impl QueryOracle for NormalForm<'_> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn query(&mut self, i: usize, gamma: f64) -> Result<bool> {
        if gamma != 1.0 && gamma != self.gamma_hat {
            return Err(Error::BiasNormalForm {
                got: gamma,
                allowed: self.gamma_hat,
            });
        }
        self.queries += 1;
        self.inner.query(i, gamma)
    }

    fn cost(&self) -> f64 {
        self.inner.cost()
    }
}

/// Reads every variable with one bias-1 query and evaluates `f`.
#[derive(Debug, Clone)]
pub struct ExactQueries {
    pub f: PartialFn,
    pub gamma_hat: f64,
}

impl NoisyAlgorithm for ExactQueries {
    fn arity(&self) -> usize {
        self.f.arity()
    }

    fn gamma_hat(&self) -> f64 {
        self.gamma_hat
    }

    fn run(&self, oracle: &mut dyn QueryOracle) -> Result<bool> {
        let mut x = 0;
        for i in 0..self.f.arity() {
            x |= (oracle.query(i, 1.0)? as usize) << i;
        }
        evaluate(&self.f, x)
    }
}

/// Estimates every variable by the majority of `repeats` queries at bias
/// `γ̂`, then evaluates `f`.
#[derive(Debug, Clone)]
pub struct MajorityVote {
    pub f: PartialFn,
    pub gamma_hat: f64,
    pub repeats: usize,
}

impl NoisyAlgorithm for MajorityVote {
    fn arity(&self) -> usize {
        self.f.arity()
    }

    fn gamma_hat(&self) -> f64 {
        self.gamma_hat
    }

    fn run(&self, oracle: &mut dyn QueryOracle) -> Result<bool> {
        let mut x = 0;
        for i in 0..self.f.arity() {
            x |= (amplify_bias_sample(oracle, i, self.gamma_hat, self.repeats)? as usize) << i;
        }
        evaluate(&self.f, x)
    }
}

/// `f(x)`, with inputs off the domain answered 0.
fn evaluate(f: &PartialFn, x: usize) -> Result<bool> {
    Ok(f.eval(x).unwrap_or(false))
}

/// Answers bias-1 and bias-`1/√t` queries about the GapMaj values of the
/// blocks of a composed input, counting bit reads.
pub struct BlockOracle<'a> {
    input: &'a [bool],
    gap: GapMaj,
    rngs: Vec<ChaCha8Rng>,
    ledger: f64,
    reads: u64,
    full_queries: u64,
    bit_queries: u64,
    transcript: Option<Vec<QueryRecord>>,
}

impl<'a> BlockOracle<'a> {
    pub fn new(input: &'a [bool], t: usize, streams: &Streams) -> Result<Self> {
        let gap = GapMaj::new(t)?;
        if input.len() % t != 0 {
            return Err(Error::InvalidArgument(format!(
                "composed input of {} bits is not a whole number of {t}-bit blocks",
                input.len()
            )));
        }
        let n = input.len() / t;
        Ok(Self {
            input,
            gap,
            rngs: (0..n).map(|i| streams.stream(PURPOSE_BLOCK, i)).collect(),
            ledger: 0.0,
            reads: 0,
            full_queries: 0,
            bit_queries: 0,
            transcript: None,
        })
    }

    pub fn with_transcript(mut self) -> Self {
        self.transcript = Some(Vec::new());
        self
    }

    fn t(&self) -> usize {
        self.gap.t()
    }

    fn block(&self, i: usize) -> &[bool] {
        &self.input[i * self.t()..(i + 1) * self.t()]
    }
}

impl QueryOracle for BlockOracle<'_> {
    fn len(&self) -> usize {
        self.input.len() / self.t()
    }

    fn query(&mut self, i: usize, gamma: f64) -> Result<bool> {
        if i >= self.len() {
            return Err(Error::InvalidArgument(format!("block {i} out of range")));
        }
        let t = self.t();
        let low = 1.0 / self.gap.sqrt_t() as f64;
        let bit = if gamma == 1.0 {
            let w = self.block(i).iter().filter(|&&b| b).count();
            self.reads += t as u64;
            self.full_queries += 1;
            self.gap.eval_weight(w).ok_or_else(|| {
                Error::InvalidArgument(format!("block {i} has weight {w}, outside the GapMaj promise"))
            })?
        } else if gamma == low {
            // A random bit of a promised block agrees with its value with
            // probability 1/2 + 2/√t, i.e. bias 4/√t; keep a quarter of it.
            let pos = self.rngs[i].gen_range(0..t);
            let raw = self.input[i * t + pos];
            self.reads += 1;
            self.bit_queries += 1;
            mix_down(raw, 0.25, &mut self.rngs[i])
        } else {
            return Err(Error::BiasNormalForm { got: gamma, allowed: low });
        };
        self.ledger += gamma * gamma;
        if let Some(tr) = &mut self.transcript {
            tr.push(QueryRecord {
                index: i,
                gamma,
                bit,
                cost: self.ledger,
            });
        }
        Ok(bit)
    }

    fn cost(&self) -> f64 {
        self.ledger
    }
}

/// How bias-`γ̂` queries are served from bias-`1/√t` ones.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum BridgeCase {
    /// Majority of `k` low-bias bits (bias `amplified`), mixed down to `γ̂`.
    Majority { k: usize, amplified: f64 },
    /// Random-walk generator.
    Walk(WalkParams),
}

impl BridgeCase {
    /// Case 1 when `γ̂ ≥ 1/√t` or the walk would be degenerate, Case 2
    /// otherwise.
    pub fn choose(gamma_hat: f64, t: usize) -> Result<Self> {
        if !(gamma_hat > 0.0 && gamma_hat <= 1.0) {
            return Err(Error::InvalidArgument(format!("low bias {gamma_hat} outside (0, 1]")));
        }
        let low = 1.0 / (t as f64).sqrt();
        if gamma_hat >= low || gamma_hat > MAX_GAMMA_HAT || walk_length(gamma_hat, t) == 0 {
            let (k, amplified) = majority_size_for(low, gamma_hat, 64 * t + 1)?;
            Ok(BridgeCase::Majority { k, amplified })
        } else {
            Ok(BridgeCase::Walk(WalkParams::new(gamma_hat, t)?))
        }
    }
}

struct Bridge<'o, 'i> {
    blocks: &'o mut BlockOracle<'i>,
    gamma_hat: f64,
    case: BridgeCase,
    source: Option<BiasedBitSource>,
    mix_rng: ChaCha8Rng,
}

impl QueryOracle for Bridge<'_, '_> {
    fn len(&self) -> usize {
        self.blocks.len()
    }

    fn query(&mut self, i: usize, gamma: f64) -> Result<bool> {
        if gamma == 1.0 {
            return self.blocks.query(i, 1.0);
        }
        debug_assert_eq!(gamma, self.gamma_hat);
        match self.case {
            BridgeCase::Majority { k, amplified } => {
                let low = 1.0 / self.blocks.gap.sqrt_t() as f64;
                let bit = amplify_bias_sample(self.blocks, i, low, k)?;
                Ok(mix_down(bit, self.gamma_hat / amplified, &mut self.mix_rng))
            }
            BridgeCase::Walk(_) => self
                .source
                .as_mut()
                .expect("walk case has a source")
                .next_bit(self.blocks, i),
        }
    }

    fn cost(&self) -> f64 {
        self.blocks.cost()
    }
}

/// One run of the composed algorithm.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Trial {
    pub output: bool,
    /// Bits of the composed input read.
    pub composed_queries: u64,
    pub full_block_queries: u64,
    pub single_bit_queries: u64,
    /// Queries issued by the noisy algorithm itself.
    pub algorithm_queries: u64,
    /// Ledger of the `{1, 1/√t}` layer.
    pub noisy_cost: f64,
    pub walks: u64,
    pub case: BridgeCase,
    #[serde(skip)]
    pub transcript: Option<Vec<QueryRecord>>,
}

/// Runs `alg` against the blocks of `input` (`n·t` bits, block `i` holding
/// bits `i·t .. (i+1)·t`).
pub fn simulate_on_gapmaj(
    alg: &dyn NoisyAlgorithm,
    t: usize,
    input: &[bool],
    seed: u64,
    record: bool,
) -> Result<Trial> {
    let streams = Streams::new(seed);
    let mut blocks = BlockOracle::new(input, t, &streams)?;
    if blocks.len() != alg.arity() {
        return Err(Error::InvalidArgument(format!(
            "algorithm has arity {} but the input has {} blocks",
            alg.arity(),
            blocks.len()
        )));
    }
    if record {
        blocks = blocks.with_transcript();
    }
    let gamma_hat = alg.gamma_hat();
    let case = BridgeCase::choose(gamma_hat, t)?;
    let n = blocks.len();
    let source = match case {
        BridgeCase::Walk(p) => Some(BiasedBitSource::new(p, n, &streams)),
        BridgeCase::Majority { .. } => None,
    };
    let mut bridge = Bridge {
        blocks: &mut blocks,
        gamma_hat,
        case,
        source,
        mix_rng: streams.stream(PURPOSE_MIX, 0),
    };
    let (output, algorithm_queries) = {
        let mut nf = NormalForm::new(&mut bridge, gamma_hat);
        let out = alg.run(&mut nf)?;
        (out, nf.queries())
    };
    let walks = bridge.source.as_ref().map_or(0, |s| s.walks());
    let expected = t as u64 * blocks.full_queries + blocks.bit_queries;
    if blocks.reads != expected {
        return Err(Error::Verification(format!(
            "read {} composed bits, expected {expected}",
            blocks.reads
        )));
    }
    Ok(Trial {
        output,
        composed_queries: blocks.reads,
        full_block_queries: blocks.full_queries,
        single_bit_queries: blocks.bit_queries,
        algorithm_queries,
        noisy_cost: blocks.ledger,
        walks,
        case,
        transcript: blocks.transcript.take(),
    })
}

/// A uniformly random block of the promised weight for `value`.
pub fn gapmaj_block(t: usize, value: bool, rng: &mut impl Rng) -> Result<Vec<bool>> {
    let g = GapMaj::new(t)?;
    let w = if value { g.high_weight() } else { g.low_weight() };
    let mut block: Vec<bool> = (0..t).map(|j| j < w).collect();
    block.shuffle(rng);
    Ok(block)
}

/// A composed input whose block `i` has GapMaj value bit `i` of `x`.
pub fn gapmaj_input(n: usize, t: usize, x: usize, rng: &mut impl Rng) -> Result<Vec<bool>> {
    let mut out = Vec::with_capacity(n * t);
    for i in 0..n {
        out.extend(gapmaj_block(t, x >> i & 1 == 1, rng)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SimulationSummary {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Wilson 95% interval for the success rate.
    pub ci95: (f64, f64),
    pub mean_cost: f64,
    pub mean_composed_queries: f64,
}

pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.96f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Seed of trial `k` derived from a master seed.
pub fn trial_seed(seed: u64, k: usize) -> u64 {
    Streams::new(seed).stream(0, k).gen()
}

/// Runs `trials` independent trials in parallel and scores them against
/// `expected`.
pub fn run_trials(
    alg: &dyn NoisyAlgorithm,
    t: usize,
    input: &[bool],
    expected: bool,
    trials: usize,
    seed: u64,
) -> Result<(SimulationSummary, Vec<Trial>)> {
    let runs: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|k| simulate_on_gapmaj(alg, t, input, trial_seed(seed, k), false))
        .collect::<Result<_>>()?;
    let successes = runs.iter().filter(|r| r.output == expected).count();
    let n = trials.max(1) as f64;
    let summary = SimulationSummary {
        trials,
        successes,
        success_rate: successes as f64 / n,
        ci95: wilson_interval(successes, trials),
        mean_cost: runs.iter().map(|r| r.noisy_cost).sum::<f64>() / n,
        mean_composed_queries: runs.iter().map(|r| r.composed_queries as f64).sum::<f64>() / n,
    };
    Ok((summary, runs))
}

/// Convenience: a seeded generator for building inputs.
pub fn input_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
