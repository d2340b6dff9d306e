use super::{minimal_sensitive_blocks, AtInput, BlockFamily, MeasureLimits};
use crate::error::Result;
use crate::func::PartialFn;
use crate::lp::{self, LinearProgram, Relation};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalWitness {
    pub value: f64,
    pub family: BlockFamily,
}

/// The fractional packing LP over the given blocks: maximise `∑ p_j`
/// subject to per-variable load `∑_{j: i ∈ B_j} p_j ≤ 1`, `p ≥ 0`.
///
/// Loads bound every `p_j ≤ 1` because blocks are non-empty.
pub fn fbs_lp(arity: usize, blocks: &[usize]) -> LinearProgram<f64> {
    let mut lp = LinearProgram::maximize(vec![1.0; blocks.len()]);
    for i in 0..arity {
        let terms: Vec<(usize, f64)> = blocks
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >> i & 1 == 1)
            .map(|(j, _)| (j, 1.0))
            .collect();
        if !terms.is_empty() {
            lp.add_sparse(&terms, Relation::Le, 1.0);
        }
    }
    lp
}

/// `fbs(f, x)`, solving the packing LP over minimal sensitive blocks.
///
/// Restricting to minimal blocks loses nothing: any sensitive block
/// contains a minimal one, and moving its weight there never raises a load.
pub fn fractional_block_sensitivity_at(
    f: &PartialFn,
    x: usize,
    limits: MeasureLimits,
) -> Result<FractionalWitness> {
    limits.check(f.arity())?;
    let blocks = minimal_sensitive_blocks(f, x);
    if blocks.is_empty() {
        return Ok(FractionalWitness {
            value: 0.0,
            family: BlockFamily::integral(x, Vec::new()),
        });
    }
    let out = lp::solve(&fbs_lp(f.arity(), &blocks))?.optimal()?;
    let (kept, weights): (Vec<usize>, Vec<f64>) = blocks
        .iter()
        .zip(&out.solution)
        .filter(|(_, &p)| p > 1e-12)
        .map(|(&b, &p)| (b, p))
        .unzip();
    Ok(FractionalWitness {
        value: out.objective,
        family: BlockFamily {
            input: x,
            blocks: kept,
            weights,
        },
    })
}

/// `fbs(f)` maximised over `Dom(f)`. Values within `1e-9` count as ties,
/// resolved towards the smallest input.
pub fn fractional_block_sensitivity(
    f: &PartialFn,
    limits: MeasureLimits,
) -> Result<AtInput<FractionalWitness>> {
    limits.check(f.arity())?;
    let domain: Vec<usize> = f.domain().collect();
    let per_input = domain
        .par_iter()
        .map(|&x| fractional_block_sensitivity_at(f, x, limits))
        .collect::<Result<Vec<_>>>()?;
    let best = per_input
        .into_iter()
        .reduce(|a, b| if b.value > a.value + 1e-9 { b } else { a })
        .unwrap_or(FractionalWitness {
            value: 0.0,
            family: BlockFamily::integral(0, Vec::new()),
        });
    Ok(AtInput {
        input: best.family.input,
        value: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{zoo, TruthTable};
    use crate::measures::block_sensitivity;

    #[test]
    fn fbs_of_or() {
        for n in 1..=6 {
            let w = fractional_block_sensitivity(&zoo::or(n).unwrap(), MeasureLimits::default()).unwrap();
            assert!((w.value.value - n as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn fbs_witness_for_or3_passes_certificate() {
        let f = zoo::or(3).unwrap();
        let blocks = minimal_sensitive_blocks(&f, 0);
        assert_eq!(blocks, vec![1, 2, 4]);
        let lp = fbs_lp(3, &blocks);
        let out = lp::solve(&lp).unwrap();
        assert!((out.objective - 3.0).abs() < 1e-12);
        assert!(lp::check_certificate(&lp, &out.solution, 1e-7).passed);
    }

    #[test]
    fn fbs_of_constant_is_zero() {
        let c = PartialFn::constant(3, false).unwrap();
        assert_eq!(fractional_block_sensitivity(&c, MeasureLimits::default()).unwrap().value.value, 0.0);
    }

    #[test]
    fn fbs_dominates_bs_on_all_three_bit_functions() {
        for bits in 0..256u64 {
            let f = TruthTable::from_u64(3, bits).to_partial();
            let bs = block_sensitivity(&f, MeasureLimits::default()).unwrap().value.blocks.len();
            let fbs = fractional_block_sensitivity(&f, MeasureLimits::default()).unwrap().value;
            assert!(fbs.value >= bs as f64 - 1e-9, "f={bits:#x}");
            assert!(fbs.value <= 3.0 + 1e-9);
            assert!(fbs.family.max_load(3) <= 1.0 + 1e-9);
        }
    }

    /// All sensitive blocks, minimal or not.
    fn all_sensitive_blocks(f: &PartialFn, x: usize) -> Vec<usize> {
        let v = f.eval(x).unwrap();
        (1..f.size()).filter(|&b| f.eval(x ^ b) == Some(!v)).collect()
    }

    #[test]
    fn minimal_block_columns_match_all_block_lp() {
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        for n in 2..=4 {
            for _ in 0..40 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let f = PartialFn::from_fn(n, |x| match (state >> (x % 60)) & 3 {
                    0 => None,
                    v => Some(v & 1 == 1),
                })
                .unwrap();
                for x in f.domain() {
                    let all = all_sensitive_blocks(&f, x);
                    if all.is_empty() {
                        continue;
                    }
                    let full = lp::solve(&fbs_lp(n, &all)).unwrap().objective;
                    let min = fractional_block_sensitivity_at(&f, x, MeasureLimits::default()).unwrap().value;
                    assert!((full - min).abs() < 1e-9, "n={n} x={x} full={full} min={min}");
                }
            }
        }
    }
}
