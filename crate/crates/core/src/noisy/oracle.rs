use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

/// Something answering noisy queries `(index, γ)`.
pub trait QueryOracle {
    /// Number of queryable positions.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Returns a bit equal to the hidden bit `i` with probability `(1+γ)/2`.
    fn query(&mut self, i: usize, gamma: f64) -> Result<bool>;

    /// Total cost paid so far.
    fn cost(&self) -> f64;
}

/// Deterministic split of one seed into independent streams, one per
/// `(purpose, index)` pair.
#[derive(Debug, Clone, Copy)]
pub struct Streams {
    seed: u64,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, purpose: u32, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((purpose as u64) << 40) | index as u64);
        rng
    }
}

pub const PURPOSE_ORACLE: u32 = 1;
pub const PURPOSE_BLOCK: u32 = 2;
pub const PURPOSE_BRIDGE: u32 = 3;
pub const PURPOSE_MIX: u32 = 4;

/// One line of a query transcript.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct QueryRecord {
    pub index: usize,
    pub gamma: f64,
    pub bit: bool,
    /// Ledger total after this query.
    pub cost: f64,
}

/// Renders a transcript as `index gamma bit cost` lines.
pub fn transcript_text(records: &[QueryRecord]) -> String {
    let mut out = String::from("# index gamma bit cumulative_cost\n");
    for r in records {
        let _ = writeln!(out, "{} {} {} {}", r.index, r.gamma, r.bit as u8, r.cost);
    }
    out
}

/// Flips a fair coin with probability `1 - keep` and otherwise returns `bit`:
/// scales the bias of `bit` by `keep`.
pub fn mix_down(bit: bool, keep: f64, rng: &mut impl Rng) -> bool {
    if rng.gen::<f64>() < keep {
        bit
    } else {
        rng.gen()
    }
}

/// The noisy oracle of the query model: hidden input `x`, a ledger of
/// `∑ γ²`, and one random stream per position.
#[derive(Debug, Clone)]
pub struct NoisyOracle {
    input: Vec<bool>,
    ledger: f64,
    queries: u64,
    rngs: Vec<ChaCha8Rng>,
    transcript: Option<Vec<QueryRecord>>,
}

impl NoisyOracle {
    pub fn new(input: Vec<bool>, seed: u64) -> Self {
        let streams = Streams::new(seed);
        let rngs = (0..input.len()).map(|i| streams.stream(PURPOSE_ORACLE, i)).collect();
        Self {
            input,
            ledger: 0.0,
            queries: 0,
            rngs,
            transcript: None,
        }
    }

    /// Hidden input taken from the bits of an input index.
    pub fn from_index(n: usize, x: usize, seed: u64) -> Self {
        Self::new((0..n).map(|i| x >> i & 1 == 1).collect(), seed)
    }

    pub fn with_transcript(mut self) -> Self {
        self.transcript = Some(Vec::new());
        self
    }

    pub fn input(&self) -> &[bool] {
        &self.input
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn transcript(&self) -> Option<&[QueryRecord]> {
        self.transcript.as_deref()
    }
}

impl QueryOracle for NoisyOracle {
    fn len(&self) -> usize {
        self.input.len()
    }

    fn query(&mut self, i: usize, gamma: f64) -> Result<bool> {
        noisy_query(self, i, gamma)
    }

    fn cost(&self) -> f64 {
        self.ledger
    }
}

pub fn noisy_query(oracle: &mut NoisyOracle, i: usize, gamma: f64) -> Result<bool> {
    if i >= oracle.input.len() {
        return Err(Error::InvalidArgument(format!(
            "query index {i} out of range for {} bits",
            oracle.input.len()
        )));
    }
    if !(gamma.abs() <= 1.0) {
        return Err(Error::InvalidArgument(format!("bias {gamma} outside [-1, 1]")));
    }
    let truth = oracle.input[i];
    let u: f64 = oracle.rngs[i].gen();
    let bit = if u < (1.0 + gamma) / 2.0 { truth } else { !truth };
    oracle.ledger += gamma * gamma;
    oracle.queries += 1;
    if let Some(t) = &mut oracle.transcript {
        t.push(QueryRecord {
            index: i,
            gamma,
            bit,
            cost: oracle.ledger,
        });
    }
    Ok(bit)
}
