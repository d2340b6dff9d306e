//! Promise-OR composed with different partial inner functions: measured
//! degrees with ratio studies, and the exact restriction facts.

use super::report::{Check, Status, VerificationReport};
use crate::adeg::{adeg_witness, bdeg_witness};
use crate::error::{Error, Result};
use crate::func::{zoo, Limits, PartialFn};
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct PrOrValues {
    pub n: usize,
    pub bdeg: usize,
    pub inner_bdeg: Vec<usize>,
    /// `bdeg / √(∑ bdeg(g_i)²)`
    pub ratio_sum: f64,
    /// `bdeg / √n`
    pub ratio_sqrt_n: f64,
    /// lcm of the `bdeg(g_i)²` and its quotient by their maximum; the
    /// ratio study assumes the lcm stays within a constant of the maximum.
    pub lcm: u64,
    pub lcm_over_max: f64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Fixes every block except `i` to an input where its inner function is 0,
/// leaving a copy of `g_i`.
fn isolate(comp: &PartialFn, inner: &[PartialFn], i: usize) -> Result<Option<PartialFn>> {
    let mut fix = BTreeMap::new();
    let mut off = 0;
    for (j, g) in inner.iter().enumerate() {
        if j != i {
            let Some(z) = (0..g.size()).find(|&z| g.eval(z) == Some(false)) else {
                return Ok(None);
            };
            for k in 0..g.arity() {
                fix.insert(off + k, z >> k & 1 == 1);
            }
        }
        off += g.arity();
    }
    comp.restrict(&fix).map(Some)
}

pub fn pror_values(inner: &[PartialFn], limits: &Limits, eps: f64) -> Result<(PrOrValues, Vec<bool>)> {
    if inner.is_empty() {
        return Err(Error::InvalidArgument("at least one inner function is needed".into()));
    }
    let total: usize = inner.iter().map(PartialFn::arity).sum();
    limits.check(total)?;
    let n = inner.len();
    let comp = zoo::pror(n)?.compose(inner)?;
    let bdeg = bdeg_witness(limits, &comp, eps)?.degree;
    let inner_bdeg = inner
        .iter()
        .map(|g| bdeg_witness(limits, g, eps).map(|w| w.degree))
        .collect::<Result<Vec<_>>>()?;
    let mut restrictions_ok = Vec::new();
    for i in 0..n {
        let ok = match isolate(&comp, inner, i)? {
            Some(r) => r == inner[i] && bdeg >= inner_bdeg[i],
            None => bdeg >= inner_bdeg[i],
        };
        restrictions_ok.push(ok);
    }
    let sq: Vec<u64> = inner_bdeg.iter().map(|&d| (d * d) as u64).collect();
    let lcm = sq.iter().copied().filter(|&d| d > 0).fold(1u64, |acc, d| acc / gcd(acc, d) * d);
    let max = sq.iter().copied().max().unwrap_or(0).max(1);
    let sum: f64 = sq.iter().map(|&d| d as f64).sum();
    Ok((
        PrOrValues {
            n,
            bdeg,
            inner_bdeg,
            ratio_sum: if sum > 0.0 { bdeg as f64 / sum.sqrt() } else { f64::NAN },
            ratio_sqrt_n: bdeg as f64 / (n as f64).sqrt(),
            lcm,
            lcm_over_max: lcm as f64 / max as f64,
        },
        restrictions_ok,
    ))
}

pub fn pror_study(names: &[String], inner: &[PartialFn], limits: &Limits, eps: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let (v, restrictions) = pror_values(inner, limits, eps)?;
    let anchor = "promise-OR composition";
    let label = names.join(",");
    let mut r = VerificationReport::new("pror");
    r.push(
        Check::new(format!("pror({label})/ratios"), anchor, "bdeg of the composition against sqrt(sum bdeg_i^2)")
            .value("n", v.n)
            .value("bdeg", v.bdeg)
            .value("inner_bdeg", &v.inner_bdeg)
            .value("ratio_sum", v.ratio_sum)
            .value("ratio_sqrt_n", v.ratio_sqrt_n)
            .status(Status::Recorded)
            .timed(start),
    );
    r.push(
        Check::new(
            format!("pror({label})/lcm"),
            anchor,
            "lcm of bdeg_i^2 relative to the maximum (flag when they differ)",
        )
        .value("lcm", v.lcm)
        .value("lcm_over_max", v.lcm_over_max)
        .value("flagged", v.lcm_over_max > 1.0)
        .status(Status::Recorded),
    );
    for (i, ok) in restrictions.iter().enumerate() {
        r.push(
            Check::new(
                format!("pror({label})/restriction-{i}"),
                anchor,
                "fixing the other blocks leaves g_i, and bdeg does not grow under restriction",
            )
            .value("bdeg", v.bdeg)
            .value("inner_bdeg", v.inner_bdeg[i])
            .pass_if(*ok),
        );
    }
    if v.n == 1 {
        let mut c = Check::new(format!("pror({label})/single"), anchor, "bdeg(PrOR_1∘g) = bdeg(g)")
            .value("bdeg", v.bdeg)
            .value("inner_bdeg", v.inner_bdeg[0])
            .pass_if(v.bdeg == v.inner_bdeg[0]);
        if let Some(t) = inner[0].to_total() {
            c = c.value("adeg_g", adeg_witness(limits, &t, eps)?.degree);
        }
        r.push(c);
    }
    Ok(r.finish())
}
