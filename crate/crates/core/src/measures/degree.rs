use crate::func::TruthTable;

/// Coefficients of the unique multilinear representation over `{0,1}^n`,
/// indexed by monomial bitmask (Möbius transform of the table).
pub fn mobius_coefficients(f: &TruthTable) -> Vec<i64> {
    let n = f.arity();
    let mut c: Vec<i64> = (0..1usize << n).map(|x| f.eval(x) as i64).collect();
    for i in 0..n {
        let bit = 1 << i;
        for s in 0..c.len() {
            if s & bit != 0 {
                c[s] -= c[s ^ bit];
            }
        }
    }
    c
}

/// Degree of the multilinear representation; 0 for constants.
pub fn exact_degree(f: &TruthTable) -> usize {
    mobius_coefficients(f)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(s, _)| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}
