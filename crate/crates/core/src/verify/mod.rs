//! Verification suites: exact inequality chains checked on small instances
//! and recorded ratio studies, collected into [`VerificationReport`]s.

mod chain;
mod pror;
mod report;
mod simulate;
mod sink;
mod symmetric;
mod walks;

pub use chain::{bs_chain, chain_values, rescaled_eps, ChainValues};
pub use pror::{pror_study, pror_values, PrOrValues};
pub use report::{Check, Status, VerificationReport};
pub use simulate::{default_algorithm, simulate_suite, transcript_reads, SimulationOutcome};
pub use sink::{sink_suite, SINK_LP_ARITY};
pub use symmetric::{
    example_junta, junta_restrictions, junta_study, paturi_band, paturi_rows, symmetric_suite, BandRow,
    JuntaRestriction, PATURI_BAND,
};
pub use walks::{
    amplification_bounds, prefix_fit, stream_stats, walks_suite, PrefixFit, WalksConfig, CHI2_3_THREE_SIGMA,
};
