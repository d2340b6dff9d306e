use super::{LinearProgram, Relation};
use crate::scalar::{CompensatedSum, LpFloat};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateCheck {
    pub passed: bool,
    pub worst_violation: f64,
    /// Row of the worst violation; `None` when it is a variable bound (or
    /// nothing is violated).
    pub worst_row: Option<usize>,
}

/// Re-evaluates every row and bound of `lp` at `solution` in compensated
/// `f64` arithmetic. Passes iff no violation exceeds `tol`.
pub fn check_certificate<T: LpFloat>(lp: &LinearProgram<T>, solution: &[T], tol: f64) -> CertificateCheck {
    let x: Vec<f64> = solution.iter().map(|v| v.to_f64_lossy()).collect();
    let mut worst = 0.0f64;
    let mut worst_row = None;
    if x.len() != lp.num_vars() || x.iter().any(|v| !v.is_finite()) {
        return CertificateCheck {
            passed: false,
            worst_violation: f64::INFINITY,
            worst_row: None,
        };
    }
    for (i, c) in lp.constraints().iter().enumerate() {
        let lhs: CompensatedSum = c
            .coeffs
            .iter()
            .zip(&x)
            .map(|(a, v)| a.to_f64_lossy() * v)
            .collect();
        let r = lhs.value() - c.rhs.to_f64_lossy();
        let viol = match c.relation {
            Relation::Le => r.max(0.0),
            Relation::Ge => (-r).max(0.0),
            Relation::Eq => r.abs(),
        };
        if viol > worst {
            worst = viol;
            worst_row = Some(i);
        }
    }
    for (b, v) in lp.bounds().iter().zip(&x) {
        let lo = b.lower.map_or(0.0, |l| (l.to_f64_lossy() - v).max(0.0));
        let hi = b.upper.map_or(0.0, |u| (v - u.to_f64_lossy()).max(0.0));
        if lo.max(hi) > worst {
            worst = lo.max(hi);
            worst_row = None;
        }
    }
    CertificateCheck {
        passed: worst <= tol,
        worst_violation: worst,
        worst_row,
    }
}
