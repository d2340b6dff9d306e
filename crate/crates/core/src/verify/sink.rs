//! The explicit SINK polynomial checked pointwise, against the LP degree and
//! against block sensitivity.

use super::report::{Check, Status, VerificationReport};
use crate::adeg::{adeg_witness, build_sink_polynomial_with, SinkPolynomial, SINK_TOL};
use crate::error::Result;
use crate::func::{zoo, Limits};
use crate::measures::{block_sensitivity, sensitivity, MeasureLimits};
use std::time::Instant;

/// Largest SINK arity for which the LP degree is also computed.
pub const SINK_LP_ARITY: usize = 6;

pub fn sink_suite(limits: &Limits, k: usize, eps: f64) -> Result<(VerificationReport, SinkPolynomial)> {
    let start = Instant::now();
    let p = build_sink_polynomial_with(limits, k, eps)?;
    let anchor = "sink polynomial";
    let mut r = VerificationReport::new("sink");
    r.push(
        Check::new(format!("sink{k}/pointwise"), anchor, "|P(x) - SINK(x)| <= eps on the whole cube")
            .value("k", k)
            .value("arity", p.poly.arity())
            .value("max_error", p.max_error)
            .value("eps", eps)
            .value("degree", p.degree)
            .value("base_degree", p.base_degree)
            .value("amplification", p.amplification)
            .value("and_error", p.and_error)
            .tolerance(SINK_TOL)
            .pass_if(p.max_error <= eps + SINK_TOL)
            .timed(start),
    );
    let f = zoo::sink(k)?;
    let arity = f.arity();
    if arity <= SINK_LP_ARITY {
        let total = f.to_total().expect("sink is total");
        let lp = adeg_witness(limits, &total, eps)?.degree;
        r.push(
            Check::new(format!("sink{k}/degree"), anchor, "construction degree >= LP adeg(SINK)")
                .value("degree", p.degree)
                .value("adeg", lp)
                .pass_if(p.degree >= lp),
        );
    } else {
        r.push(
            Check::new(format!("sink{k}/degree"), anchor, "LP adeg(SINK) skipped above the LP arity")
                .value("degree", p.degree)
                .value("lp_arity", SINK_LP_ARITY)
                .status(Status::Recorded),
        );
    }
    let bs = block_sensitivity(&f, MeasureLimits::default())?;
    let s = sensitivity(&f);
    r.push(
        Check::new(format!("sink{k}/sensitivity"), anchor, "s(SINK_k) and bs(SINK_k) >= k - 1")
            .value("s", s.value)
            .value("bs", bs.value.blocks.len())
            .pass_if(s.value >= k - 1 && bs.value.blocks.len() >= k - 1),
    );
    Ok((r.finish(), p))
}
