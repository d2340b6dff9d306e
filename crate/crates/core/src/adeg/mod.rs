//! Approximate degree, bounded approximate degree and the polynomials that
//! witness them.

mod amplify;
mod feasibility;
mod poly;
mod sink;
mod sweep;

pub use amplify::{amplify_eval, amplify_poly};
pub use feasibility::{
    adeg, adeg_feasible, adeg_feasible_symmetric, adeg_feasible_with, adeg_symmetric, adeg_witness, bdeg,
    bdeg_feasible, bdeg_feasible_symmetric, bdeg_feasible_with, bdeg_symmetric, bdeg_witness, check_witness,
    lp_limits, monomials, Approximation, DEFAULT_LP_ARITY, FEASIBILITY_TOL,
};
pub use poly::{MultilinearPoly, UnivariatePoly};
pub use sink::{build_sink_polynomial, build_sink_polynomial_with, SinkPolynomial, SINK_MAX_ARITY, SINK_TOL};
pub use sweep::{degree_sweep, is_monotone, sweep_csv, SweepRow, SWEEP_CSV_HEADER};

/// Multilinear evaluation at a point of `[0,1]^n`.
pub fn eval_poly<T: crate::scalar::Scalar>(p: &MultilinearPoly<T>, z: &[T]) -> T {
    p.eval(z)
}
