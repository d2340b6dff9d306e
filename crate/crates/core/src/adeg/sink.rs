//! Explicit approximating polynomial for SINK: a sum over vertices of
//! amplified approximants to "every incident edge points in".

use super::amplify::{amplify_eval, amplify_poly};
use super::feasibility::bdeg_witness;
use super::poly::MultilinearPoly;
use crate::error::{Error, Result};
use crate::func::{zoo, Limits};

/// Arity bound of the construction (`k ≤ 5`).
pub const SINK_MAX_ARITY: usize = 10;

/// Largest odd amplification degree tried before giving up.
const MAX_AMPLIFICATION: usize = 201;

#[derive(Debug, Clone)]
pub struct SinkPolynomial {
    pub k: usize,
    pub poly: MultilinearPoly<f64>,
    pub degree: usize,
    /// Worst `|P(x) - SINK(x)|` over the cube.
    pub max_error: f64,
    /// Degree of the bounded AND approximant before amplification.
    pub base_degree: usize,
    /// Odd degree of the amplification polynomial.
    pub amplification: usize,
    /// Worst error of one amplified AND approximant.
    pub and_error: f64,
}

/// Verification slack on the pointwise check.
pub const SINK_TOL: f64 = 1e-9;

pub fn build_sink_polynomial(k: usize, eps: f64) -> Result<SinkPolynomial> {
    build_sink_polynomial_with(&Limits { max_arity: SINK_MAX_ARITY }, k, eps)
}

pub fn build_sink_polynomial_with(limits: &Limits, k: usize, eps: f64) -> Result<SinkPolynomial> {
    if k < 2 {
        return Err(Error::InvalidArgument("sink needs k >= 2".into()));
    }
    let n = k * (k - 1) / 2;
    limits.check(n)?;
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidArgument(format!("epsilon {eps} outside (0, 1/2)")));
    }
    let and = zoo::and(k - 1)?;
    // A bounded approximant keeps its values inside [0, ε] ∪ [1-ε, 1], where
    // the amplification polynomial pushes them towards the ends.
    let base = bdeg_witness(limits, &and, eps)?;
    let per_vertex = eps / k as f64;
    let amplified_error = |m: usize| -> Result<f64> {
        let mut worst = 0.0f64;
        for x in 0..and.size() {
            let v = amplify_eval(m, &base.witness.eval_bool(x))?;
            let target = if and.eval(x) == Some(true) { 1.0 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
        Ok(worst)
    };
    let mut m = 1;
    while amplified_error(m)? > per_vertex {
        m += 2;
        if m > MAX_AMPLIFICATION {
            return Err(Error::Verification(format!(
                "no amplification up to degree {MAX_AMPLIFICATION} reaches error {per_vertex}"
            )));
        }
    }
    let and_poly = base.witness.compose_univariate(&amplify_poly::<f64>(m)?);

    let mut total = MultilinearPoly::zero(n);
    for v in 0..k {
        // Incoming from u < v means x_uv = 1; incoming from u > v means x_vu = 0.
        let map: Vec<(usize, bool)> = (0..k)
            .filter(|&u| u != v)
            .map(|u| {
                if u < v {
                    (zoo::sink_edge_index(k, u, v), false)
                } else {
                    (zoo::sink_edge_index(k, v, u), true)
                }
            })
            .collect();
        total = total.add(&and_poly.substitute_literals(n, &map));
    }

    let sink = zoo::sink(k)?;
    let mut max_error = 0.0f64;
    for x in 0..sink.size() {
        let target = if sink.eval(x) == Some(true) { 1.0 } else { 0.0 };
        max_error = max_error.max((total.eval_bool(x) - target).abs());
    }
    if max_error > eps + SINK_TOL {
        return Err(Error::Verification(format!(
            "sink polynomial for k = {k} has error {max_error} > {eps}"
        )));
    }
    Ok(SinkPolynomial {
        k,
        degree: total.degree(),
        poly: total,
        max_error,
        base_degree: base.degree,
        amplification: m,
        and_error: amplified_error(m)?,
    })
}
