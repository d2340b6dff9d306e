use super::AtInput;
use crate::func::PartialFn;

/// Number of single-bit flips at `x` that stay in `Dom(f)` and change the
/// value. Zero when `x` itself is outside the domain.
pub fn sensitivity_at(f: &PartialFn, x: usize) -> usize {
    let Some(v) = f.eval(x) else { return 0 };
    (0..f.arity())
        .filter(|&i| f.eval(x ^ (1 << i)) == Some(!v))
        .count()
}

/// `s(f)` with the smallest input attaining it (input 0 for an empty domain).
pub fn sensitivity(f: &PartialFn) -> AtInput<usize> {
    f.domain()
        .map(|x| AtInput {
            value: sensitivity_at(f, x),
            input: x,
        })
        .fold(AtInput { value: 0, input: 0 }, |best, cur| {
            if cur.value > best.value {
                cur
            } else {
                best
            }
        })
}
