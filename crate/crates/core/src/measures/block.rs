use super::{AtInput, MeasureLimits};
use crate::error::Result;
use crate::func::PartialFn;
use rayon::prelude::*;
use serde::Serialize;

/// Blocks at a base input, encoded as variable bitmasks, with weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockFamily {
    pub input: usize,
    pub blocks: Vec<usize>,
    pub weights: Vec<f64>,
}

impl BlockFamily {
    pub fn integral(input: usize, blocks: Vec<usize>) -> Self {
        let weights = vec![1.0; blocks.len()];
        Self {
            input,
            blocks,
            weights,
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Every block is sensitive at the base input.
    pub fn all_sensitive(&self, f: &PartialFn) -> bool {
        let Some(v) = f.eval(self.input) else {
            return false;
        };
        self.blocks
            .iter()
            .all(|&b| b != 0 && f.eval(self.input ^ b) == Some(!v))
    }

    pub fn pairwise_disjoint(&self) -> bool {
        let mut seen = 0usize;
        self.blocks.iter().all(|&b| {
            let ok = seen & b == 0;
            seen |= b;
            ok
        })
    }

    /// Largest per-variable load `∑_{j: i ∈ B_j} p_j`.
    pub fn max_load(&self, arity: usize) -> f64 {
        (0..arity)
            .map(|i| {
                self.blocks
                    .iter()
                    .zip(&self.weights)
                    .filter(|(&b, _)| b >> i & 1 == 1)
                    .map(|(_, w)| w)
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// Minimal sensitive blocks at `x`, in increasing bitmask order.
///
/// A block `B` is sensitive when `x ⊕ B ∈ Dom(f)` and `f(x ⊕ B) ≠ f(x)`.
/// Sets are visited in increasing numeric order, so every proper subset of
/// `B` is seen before `B`; `covered[B]` records whether `B` contains a
/// sensitive block.
pub fn minimal_sensitive_blocks(f: &PartialFn, x: usize) -> Vec<usize> {
    let Some(v) = f.eval(x) else { return Vec::new() };
    let n = f.arity();
    let mut covered = vec![false; 1 << n];
    let mut out = Vec::new();
    for b in 1..(1usize << n) {
        let mut rest = b;
        let mut hit = false;
        while rest != 0 {
            let low = rest & rest.wrapping_neg();
            if covered[b ^ low] {
                hit = true;
                break;
            }
            rest ^= low;
        }
        if hit {
            covered[b] = true;
        } else if f.eval(x ^ b) == Some(!v) {
            covered[b] = true;
            out.push(b);
        }
    }
    out
}

/// Maximum number of pairwise disjoint blocks, by branch and bound on the
/// lowest still-available variable: it is either left uncovered or covered
/// by one of the blocks containing it.
fn max_packing(n: usize, blocks: &[usize]) -> Vec<usize> {
    if blocks.is_empty() {
        return Vec::new();
    }
    let mut by_low: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &b in blocks {
        by_low[b.trailing_zeros() as usize].push(b);
    }
    let min_size = blocks.iter().map(|b| b.count_ones()).min().unwrap() as usize;

    struct Search<'a> {
        by_low: &'a [Vec<usize>],
        min_size: usize,
        best: Vec<usize>,
        cur: Vec<usize>,
    }
    impl Search<'_> {
        fn run(&mut self, avail: usize) {
            let bound = self.cur.len() + avail.count_ones() as usize / self.min_size;
            if bound <= self.best.len() {
                return;
            }
            if avail == 0 {
                self.best = self.cur.clone();
                return;
            }
            let i = avail.trailing_zeros() as usize;
            // blocks are grouped by their lowest variable; a block whose lowest
            // variable is below `i` cannot fit since those are unavailable.
            for k in 0..self.by_low[i].len() {
                let b = self.by_low[i][k];
                if b & !avail == 0 {
                    self.cur.push(b);
                    self.run(avail & !b);
                    self.cur.pop();
                }
            }
            self.run(avail & !(1 << i));
        }
    }

    let mut s = Search {
        by_low: &by_low,
        min_size,
        best: Vec::new(),
        cur: Vec::new(),
    };
    s.run((1usize << n) - 1);
    s.best
}

/// `bs(f, x)` with a witness family of disjoint minimal blocks.
pub fn block_sensitivity_at(f: &PartialFn, x: usize, limits: MeasureLimits) -> Result<BlockFamily> {
    limits.check(f.arity())?;
    let blocks = minimal_sensitive_blocks(f, x);
    Ok(BlockFamily::integral(x, max_packing(f.arity(), &blocks)))
}

/// `bs(f)` maximised over `Dom(f)`; ties go to the smallest input.
pub fn block_sensitivity(f: &PartialFn, limits: MeasureLimits) -> Result<AtInput<BlockFamily>> {
    limits.check(f.arity())?;
    let domain: Vec<usize> = f.domain().collect();
    let best = domain
        .par_iter()
        .map(|&x| BlockFamily::integral(x, max_packing(f.arity(), &minimal_sensitive_blocks(f, x))))
        .reduce_with(|a, b| {
            let better = b.blocks.len() > a.blocks.len()
                || (b.blocks.len() == a.blocks.len() && b.input < a.input);
            if better {
                b
            } else {
                a
            }
        })
        .unwrap_or_else(|| BlockFamily::integral(0, Vec::new()));
    Ok(AtInput {
        input: best.input,
        value: best,
    })
}
