//! Exact combinatorial complexity measures.

mod block;
mod degree;
mod dtree;
mod fbs;
mod paturi;
mod report;
mod sensitivity;

pub use block::{block_sensitivity, block_sensitivity_at, minimal_sensitive_blocks, BlockFamily};
pub use degree::{exact_degree, mobius_coefficients};
pub use dtree::decision_tree_depth;
pub use fbs::{fractional_block_sensitivity, fractional_block_sensitivity_at, fbs_lp, FractionalWitness};
pub use paturi::paturi_gamma;
pub use report::{measure_report, MeasureReport};
pub use sensitivity::{sensitivity, sensitivity_at};

use crate::error::{Error, Result};

/// Default arity bound for block-sensitivity and decision-tree searches.
pub const DEFAULT_BS_ARITY: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureLimits {
    pub max_arity: usize,
}

impl Default for MeasureLimits {
    fn default() -> Self {
        Self {
            max_arity: DEFAULT_BS_ARITY,
        }
    }
}

impl MeasureLimits {
    fn check(&self, arity: usize) -> Result<()> {
        if arity > self.max_arity {
            Err(Error::ArityBound {
                arity,
                bound: self.max_arity,
            })
        } else {
            Ok(())
        }
    }
}

/// A value maximised over inputs together with the (smallest) input
/// attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct AtInput<V> {
    pub value: V,
    pub input: usize,
}
