//! The noisy-oracle query model: queries of bias `γ` cost `γ²`, bias
//! amplification by majority, the random-walk generator of low-bias bits
//! and the reduction to plain queries on `f ∘ GapMaj_t`.

mod amplify;
mod oracle;
mod simulate;
mod walk;

pub use amplify::{amplify_bias_exact, amplify_bias_sample, majority_size_for};
pub use oracle::{mix_down, noisy_query, transcript_text, NoisyOracle, QueryOracle, QueryRecord, Streams};
pub use simulate::{
    gapmaj_block, gapmaj_input, input_rng, run_trials, simulate_on_gapmaj, trial_seed, wilson_interval, BlockOracle,
    BridgeCase, ExactQueries, MajorityVote, NoisyAlgorithm, NormalForm, SimulationSummary, Trial,
};
pub use walk::{
    conditioned_prefix_law, generate_biased_bits, mu_ratio_check, mu_t, mu_t_expanded, sample_conditioned_walk,
    sample_conditioned_walk_rejection, walk_length, BiasedBitSource, GeneratedBits, MuRatio, WalkParams,
    MAX_GAMMA_HAT, STEP_CAP,
};
