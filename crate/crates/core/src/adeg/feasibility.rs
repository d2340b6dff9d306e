//! Feasibility LPs for approximate and bounded approximate degree.
//!
//! The LP minimises the worst error `e` over the domain. Writing the
//! polynomial as `1/2 + q` and the error as `1/2 + s`, every constraint has a
//! non-negative right-hand side, so the slack basis is feasible from the
//! start and phase one never runs.

use super::poly::MultilinearPoly;
use crate::error::{Error, Result};
use crate::func::{Limits, PartialFn, SymmetricSpectrum, TruthTable};
use crate::lp::{self, Bound, LinearProgram, Relation, CERT_TOL};
use crate::scalar::LpFloat;

/// Slack added to `ε` when deciding feasibility.
pub const FEASIBILITY_TOL: f64 = 1e-7;

/// Default arity bound for degree LPs.
pub const DEFAULT_LP_ARITY: usize = 12;

pub fn lp_limits() -> Limits {
    Limits {
        max_arity: DEFAULT_LP_ARITY,
    }
}

/// Outcome of one feasibility solve at a fixed degree.
#[derive(Debug, Clone)]
pub struct Approximation<T> {
    pub degree: usize,
    pub epsilon: T,
    /// Optimal worst-case error over the domain.
    pub error: T,
    pub feasible: bool,
    pub bounded: bool,
    /// Polynomial attaining `error`.
    pub witness: MultilinearPoly<T>,
    pub pivots: usize,
}

/// A point of the LP: the basis values there and the target, `None` for
/// points that only carry boundedness rows.
struct Point<T> {
    basis: Vec<(usize, T)>,
    target: Option<bool>,
}

/// Solves the min-error LP. Column 0 of the basis must be the constant 1.
/// Returns the coefficients (constant shift applied) and the error.
fn solve_min_error<T: LpFloat>(basis_len: usize, points: &[Point<T>], bounded: bool) -> Result<(Vec<T>, T, usize)> {
    let half = T::ratio(1, 2);
    if points.iter().all(|p| p.target.is_none()) {
        let mut c = vec![T::zero(); basis_len];
        c[0] = half;
        return Ok((c, T::zero(), 0));
    }
    let s = basis_len;
    let mut objective = vec![T::zero(); basis_len + 1];
    objective[s] = T::one();
    let mut lp = LinearProgram::minimize(objective);
    for v in 0..=s {
        lp.set_bound(v, Bound::free());
    }
    let neg = |terms: &[(usize, T)]| terms.iter().map(|&(i, c)| (i, -c)).collect::<Vec<_>>();
    for p in points {
        let with_s = |mut t: Vec<(usize, T)>| {
            t.push((s, -T::one()));
            t
        };
        match (p.target, bounded) {
            (Some(false), false) => {
                lp.add_sparse(&with_s(p.basis.clone()), Relation::Le, T::zero());
                lp.add_sparse(&with_s(neg(&p.basis)), Relation::Le, T::one());
            }
            (Some(true), false) => {
                lp.add_sparse(&with_s(p.basis.clone()), Relation::Le, T::one());
                lp.add_sparse(&with_s(neg(&p.basis)), Relation::Le, T::zero());
            }
            (Some(false), true) => {
                lp.add_sparse(&with_s(p.basis.clone()), Relation::Le, T::zero());
                lp.add_sparse(&neg(&p.basis), Relation::Le, half);
            }
            (Some(true), true) => {
                lp.add_sparse(&p.basis, Relation::Le, half);
                lp.add_sparse(&with_s(neg(&p.basis)), Relation::Le, T::zero());
            }
            (None, true) => {
                lp.add_sparse(&p.basis, Relation::Le, half);
                lp.add_sparse(&neg(&p.basis), Relation::Le, half);
            }
            (None, false) => {}
        }
    }
    let out = lp::solve(&lp)?.optimal()?;
    let mut coeffs = out.solution[..basis_len].to_vec();
    coeffs[0] = coeffs[0] + half;
    Ok((coeffs, out.solution[s] + half, out.pivots))
}

/// Monomials of degree at most `d`, ordered by degree then bitmask.
pub fn monomials(arity: usize, d: usize) -> Vec<usize> {
    let mut m: Vec<usize> = (0..1usize << arity)
        .filter(|s| s.count_ones() as usize <= d)
        .collect();
    m.sort_by_key(|&s| (s.count_ones(), s));
    m
}

/// Re-checks a witness pointwise: error at most `error` on the domain and,
/// when bounded, values in `[0,1]` on every point of the cube.
pub fn check_witness<T: LpFloat>(f: &PartialFn, p: &MultilinearPoly<T>, error: f64, bounded: bool) -> Result<()> {
    let mut worst = 0.0f64;
    for x in 0..f.size() {
        let v = p.eval_bool(x).to_f64_lossy();
        if let Some(b) = f.eval(x) {
            let t = if b { 1.0 } else { 0.0 };
            worst = worst.max((v - t).abs() - error);
        }
        if bounded {
            worst = worst.max(-v).max(v - 1.0);
        }
    }
    if worst > CERT_TOL {
        return Err(Error::Certificate {
            violation: worst,
            tolerance: CERT_TOL,
        });
    }
    Ok(())
}

fn check_args<T: LpFloat>(limits: &Limits, arity: usize, d: usize, eps: T) -> Result<()> {
    limits.check(arity)?;
    if d > arity {
        return Err(Error::InvalidArgument(format!("degree {d} exceeds arity {arity}")));
    }
    if !(eps > T::zero() && eps < T::ratio(1, 2)) {
        return Err(Error::InvalidArgument(format!("epsilon {eps:?} outside (0, 1/2)")));
    }
    Ok(())
}

fn multilinear<T: LpFloat>(
    limits: &Limits,
    f: &PartialFn,
    d: usize,
    eps: T,
    bounded: bool,
) -> Result<Approximation<T>> {
    let n = f.arity();
    check_args(limits, n, d, eps)?;
    let monos = monomials(n, d);
    let points: Vec<Point<T>> = (0..f.size())
        .map(|x| Point {
            basis: monos
                .iter()
                .enumerate()
                .filter(|(_, &s)| s & !x == 0)
                .map(|(j, _)| (j, T::one()))
                .collect(),
            target: f.eval(x),
        })
        .collect();
    let (coeffs, error, pivots) = solve_min_error(monos.len(), &points, bounded)?;
    let witness = MultilinearPoly::from_terms(n, monos.iter().copied().zip(coeffs));
    check_witness(f, &witness, error.to_f64_lossy(), bounded)?;
    Ok(Approximation {
        degree: d,
        epsilon: eps,
        feasible: error.to_f64_lossy() <= eps.to_f64_lossy() + FEASIBILITY_TOL,
        error,
        bounded,
        witness,
        pivots,
    })
}

/// Best degree-`d` approximation of a total function; feasible when its
/// error is at most `ε` (boundary inclusive, up to [`FEASIBILITY_TOL`]).
pub fn adeg_feasible<T: LpFloat>(f: &TruthTable, d: usize, eps: T) -> Result<Approximation<T>> {
    adeg_feasible_with(&lp_limits(), f, d, eps)
}

pub fn adeg_feasible_with<T: LpFloat>(limits: &Limits, f: &TruthTable, d: usize, eps: T) -> Result<Approximation<T>> {
    multilinear(limits, &f.to_partial(), d, eps, false)
}

/// As [`adeg_feasible`] for a partial function, with the polynomial also
/// confined to `[0,1]` on the whole cube.
pub fn bdeg_feasible<T: LpFloat>(pf: &PartialFn, d: usize, eps: T) -> Result<Approximation<T>> {
    bdeg_feasible_with(&lp_limits(), pf, d, eps)
}

pub fn bdeg_feasible_with<T: LpFloat>(limits: &Limits, pf: &PartialFn, d: usize, eps: T) -> Result<Approximation<T>> {
    multilinear(limits, pf, d, eps, true)
}

/// Scans `d = 0, 1, …` and returns the first feasible approximation. The LP
/// error must not increase along the scan; an increase is reported as a
/// verification error.
fn scan<T: LpFloat>(n: usize, mut solve: impl FnMut(usize) -> Result<Approximation<T>>) -> Result<Approximation<T>> {
    let mut prev: Option<T> = None;
    for d in 0..=n {
        let a = solve(d)?;
        if let Some(p) = prev {
            if a.error.to_f64_lossy() > p.to_f64_lossy() + FEASIBILITY_TOL {
                return Err(Error::Verification(format!(
                    "approximation error rose from {p:?} to {:?} at degree {d}",
                    a.error
                )));
            }
        }
        if a.feasible {
            return Ok(a);
        }
        prev = Some(a.error);
    }
    Err(Error::Verification(format!("no degree up to {n} is feasible")))
}

/// Approximate degree with the minimal witness.
pub fn adeg_witness<T: LpFloat>(limits: &Limits, f: &TruthTable, eps: T) -> Result<Approximation<T>> {
    limits.check(f.arity())?;
    scan(f.arity(), |d| adeg_feasible_with(limits, f, d, eps))
}

pub fn adeg<T: LpFloat>(f: &TruthTable, eps: T) -> Result<usize> {
    Ok(adeg_witness(&lp_limits(), f, eps)?.degree)
}

pub fn bdeg_witness<T: LpFloat>(limits: &Limits, pf: &PartialFn, eps: T) -> Result<Approximation<T>> {
    limits.check(pf.arity())?;
    scan(pf.arity(), |d| bdeg_feasible_with(limits, pf, d, eps))
}

pub fn bdeg<T: LpFloat>(pf: &PartialFn, eps: T) -> Result<usize> {
    Ok(bdeg_witness(&lp_limits(), pf, eps)?.degree)
}

/// `C(w, j)` as a float.
fn binom<T: LpFloat>(w: usize, j: usize) -> T {
    if j > w {
        return T::zero();
    }
    (0..j).fold(T::one(), |acc, i| acc * T::from_usize(w - i).unwrap() / T::from_usize(i + 1).unwrap())
}

/// Symmetric form of the LP: by averaging over variable permutations an
/// optimal polynomial for a symmetric function may be taken symmetric, i.e.
/// `∑_j c_j e_j(x)` with `e_j(x) = C(|x|, j)`, so one row pair per Hamming
/// weight suffices. The witness is expanded back to multilinear form.
fn symmetric<T: LpFloat>(
    limits: &Limits,
    spec: &SymmetricSpectrum,
    d: usize,
    eps: T,
    bounded: bool,
) -> Result<Approximation<T>> {
    let n = spec.arity();
    check_args(limits, n, d, eps)?;
    let points: Vec<Point<T>> = (0..=n)
        .map(|w| Point {
            basis: (0..=d.min(w)).map(|j| (j, binom::<T>(w, j))).collect(),
            target: spec.at(w),
        })
        .collect();
    let (coeffs, error, pivots) = solve_min_error(d + 1, &points, bounded)?;
    // Pointwise check on the weight profile.
    let mut worst = 0.0f64;
    for (w, p) in points.iter().enumerate() {
        let v: f64 = p.basis.iter().map(|&(j, b)| (coeffs[j] * b).to_f64_lossy()).sum();
        if let Some(t) = spec.at(w) {
            worst = worst.max((v - if t { 1.0 } else { 0.0 }).abs() - error.to_f64_lossy());
        }
        if bounded {
            worst = worst.max(-v).max(v - 1.0);
        }
    }
    if worst > CERT_TOL {
        return Err(Error::Certificate {
            violation: worst,
            tolerance: CERT_TOL,
        });
    }
    let witness = MultilinearPoly::from_terms(
        n,
        monomials(n, d)
            .into_iter()
            .map(|s| (s, coeffs[s.count_ones() as usize])),
    );
    Ok(Approximation {
        degree: d,
        epsilon: eps,
        feasible: error.to_f64_lossy() <= eps.to_f64_lossy() + FEASIBILITY_TOL,
        error,
        bounded,
        witness,
        pivots,
    })
}

/// Feasibility for a symmetric function, solved over weight classes.
/// The returned witness is expanded to multilinear form, so `n` is bounded
/// by `limits`.
pub fn adeg_feasible_symmetric<T: LpFloat>(
    limits: &Limits,
    spec: &SymmetricSpectrum,
    d: usize,
    eps: T,
) -> Result<Approximation<T>> {
    if !spec.is_total() {
        return Err(Error::InvalidArgument("adeg needs a total function".into()));
    }
    symmetric(limits, spec, d, eps, false)
}

pub fn bdeg_feasible_symmetric<T: LpFloat>(
    limits: &Limits,
    spec: &SymmetricSpectrum,
    d: usize,
    eps: T,
) -> Result<Approximation<T>> {
    symmetric(limits, spec, d, eps, true)
}

pub fn adeg_symmetric<T: LpFloat>(limits: &Limits, spec: &SymmetricSpectrum, eps: T) -> Result<usize> {
    Ok(scan(spec.arity(), |d| adeg_feasible_symmetric(limits, spec, d, eps))?.degree)
}

pub fn bdeg_symmetric<T: LpFloat>(limits: &Limits, spec: &SymmetricSpectrum, eps: T) -> Result<usize> {
    Ok(scan(spec.arity(), |d| bdeg_feasible_symmetric(limits, spec, d, eps))?.degree)
}
