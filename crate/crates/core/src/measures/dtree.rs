use super::MeasureLimits;
use crate::error::Result;
use crate::func::PartialFn;

/// Deterministic decision-tree depth, by dynamic programming over all
/// `3^n` restrictions.
///
/// A restriction is a base-3 number whose digit `i` is 0 or 1 when
/// variable `i` is fixed and 2 when free. Replacing a 2 by 0 or 1 gives a
/// smaller number, so one increasing sweep sees children before parents.
/// A restriction needs no queries once `f` is constant on the domain points
/// it contains (or it contains none).
pub fn decision_tree_depth(f: &PartialFn, limits: MeasureLimits) -> Result<usize> {
    let n = f.arity();
    limits.check(n)?;
    let pow3: Vec<usize> = (0..=n).map(|i| 3usize.pow(i as u32)).collect();
    let states = pow3[n];
    // bit 0: value 0 reachable, bit 1: value 1 reachable
    let mut seen = vec![0u8; states];
    let mut depth = vec![0u8; states];
    let mut digits = vec![0u8; n];
    for s in 0..states {
        if s > 0 {
            for d in digits.iter_mut() {
                if *d == 2 {
                    *d = 0;
                } else {
                    *d += 1;
                    break;
                }
            }
        }
        let first_free = digits.iter().position(|&d| d == 2);
        match first_free {
            None => {
                let x = digits
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (i, &d)| acc | (d as usize) << i);
                seen[s] = f.eval(x).map_or(0, |v| 1 << v as u8);
            }
            Some(i) => {
                seen[s] = seen[s - 2 * pow3[i]] | seen[s - pow3[i]];
                if seen[s] == 3 {
                    depth[s] = digits
                        .iter()
                        .enumerate()
                        .filter(|(_, &d)| d == 2)
                        .map(|(j, _)| 1 + depth[s - 2 * pow3[j]].max(depth[s - pow3[j]]))
                        .min()
                        .unwrap();
                }
            }
        }
    }
    Ok(depth[states - 1] as usize)
}
