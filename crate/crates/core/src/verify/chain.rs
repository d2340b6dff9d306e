//! The block-sensitivity composition chain: from `f ∘ g` down to a promise
//! OR of partial inner functions, every degree computed by LP.

use super::report::{Check, Status, VerificationReport};
use crate::adeg::{adeg_witness, bdeg_witness};
use crate::error::{Error, Result};
use crate::func::{zoo, Limits, PartialFn};
use crate::measures::{block_sensitivity, MeasureLimits};
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

/// Every quantity of the chain.
#[derive(Debug, Clone, Serialize)]
pub struct ChainValues {
    /// Input of maximal block sensitivity.
    pub a: usize,
    /// Disjoint minimal sensitive blocks at `a`, as variable bitmasks.
    pub blocks: Vec<usize>,
    /// Whether `f` was negated so that it is 0 at `a`.
    pub negated: bool,
    pub adeg_fg: usize,
    pub bdeg_f1g: usize,
    /// `bdeg(f′∘g)` at the error [`rescaled_eps`] reached by mapping an
    /// approximant of `f∘g` affinely into `[0, 1]`.
    pub bdeg_f1g_rescaled: usize,
    pub bdeg_f2g: usize,
    pub bdeg_pror: usize,
    pub bdeg_inner: Vec<usize>,
    pub adeg_g: usize,
    /// `f″ ∘ g` and the promise-OR form are the same function up to a
    /// renaming of variables.
    pub same_function: bool,
}

/// An `ε`-approximant of a total function takes values in `[-ε, 1+ε]`;
/// `(p + ε)/(1 + 2ε)` is bounded and has error `2ε/(1 + 2ε)`.
pub fn rescaled_eps(eps: f64) -> f64 {
    2.0 * eps / (1.0 + 2.0 * eps)
}

impl ChainValues {
    /// Failed steps of the chain with every degree at the same `ε`.
    pub fn violations(&self) -> usize {
        let mut v = 0;
        v += (self.adeg_fg < self.bdeg_f1g) as usize;
        v += (self.bdeg_f1g < self.bdeg_f2g) as usize;
        v += (self.bdeg_f2g != self.bdeg_pror) as usize;
        v += !self.same_function as usize;
        v += self.bdeg_inner.iter().filter(|&&d| d < self.adeg_g).count();
        v
    }

    /// As [`violations`](Self::violations), with the first step compared
    /// against `bdeg(f′∘g)` at [`rescaled_eps`].
    pub fn violations_rescaled(&self) -> usize {
        self.violations() - (self.adeg_fg < self.bdeg_f1g) as usize + (self.adeg_fg < self.bdeg_f1g_rescaled) as usize
    }
}

fn vars(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask >> i & 1 == 1).collect()
}

/// Packs the bits of `x` at positions `vars` into a dense index.
fn pack(x: usize, vars: &[usize]) -> usize {
    vars.iter().enumerate().fold(0, |acc, (k, &v)| acc | ((x >> v & 1) << k))
}

/// Builds the chain for total `f` and `g`.
pub fn chain_values(f: &PartialFn, g: &PartialFn, limits: &Limits, eps: f64) -> Result<ChainValues> {
    if !f.is_total() || !g.is_total() {
        return Err(Error::InvalidArgument("the chain needs total f and g".into()));
    }
    if !f.is_non_constant() {
        return Err(Error::InvalidArgument("non-constant required: f is constant".into()));
    }
    if !g.is_non_constant() {
        return Err(Error::InvalidArgument("non-constant required: g is constant".into()));
    }
    let (n, m) = (f.arity(), g.arity());
    limits.check(n * m)?;

    let bs = block_sensitivity(f, MeasureLimits { max_arity: n.max(1) })?;
    let a = bs.input;
    let blocks = bs.value.blocks.clone();
    let negated = f.eval(a) == Some(true);
    let h = if negated { f.negate() } else { f.clone() };

    // f′: h on {a} ∪ {a^B_i}.
    let f1 = h.restrict_domain(std::iter::once(a).chain(blocks.iter().map(|b| a ^ b)));
    let f1g = f1.compose_uniform(g)?;
    let fg = f.compose_uniform(g)?;

    // f″: fix the outer variables outside the blocks to a.
    let union = blocks.iter().fold(0, |acc, b| acc | b);
    let fixed: Vec<usize> = (0..n).filter(|j| union >> j & 1 == 0).collect();
    let witness = |v: bool| (0..g.size()).find(|&z| g.eval(z) == Some(v)).expect("g is non-constant");
    let mut inner_fix = BTreeMap::new();
    for &j in &fixed {
        let z = witness(a >> j & 1 == 1);
        for k in 0..m {
            inner_fix.insert(j * m + k, z >> k & 1 == 1);
        }
    }
    let f2g = f1g.restrict(&inner_fix)?;
    let outer_fix: BTreeMap<usize, bool> = fixed.iter().map(|&j| (j, a >> j & 1 == 1)).collect();
    let f2g_direct = f1.restrict(&outer_fix)?.compose_uniform(g)?;

    // PrOR_b ∘ (I_1 ∘ g, …, I_b ∘ g).
    let mut inner = Vec::new();
    for &b in &blocks {
        let bv = vars(b);
        let lo = pack(a, &bv);
        let hi = pack(a ^ b, &bv);
        let i_fn = PartialFn::from_fn(bv.len(), |x| {
            if x == lo {
                Some(false)
            } else if x == hi {
                Some(true)
            } else {
                None
            }
        })?;
        inner.push(i_fn.compose_uniform(g)?);
    }
    let pror = zoo::pror(blocks.len())?.compose(&inner)?;

    // Rename the variables of f″ ∘ g into the promise-OR layout.
    let free_outer = vars(union);
    let mut offsets = BTreeMap::new();
    let mut off = 0;
    for &b in &blocks {
        for v in vars(b) {
            offsets.insert(v, off);
            off += m;
        }
    }
    let perm: Vec<usize> = free_outer
        .iter()
        .flat_map(|u| (0..m).map(move |k| (u, k)))
        .map(|(u, k)| offsets[u] + k)
        .collect();
    // permute: result(y) = f2g(x) with x_i = y[perm[i]].
    let renamed = f2g.permute(&perm)?;
    let same_function = renamed == pror && f2g == f2g_direct;

    let tt = |p: &PartialFn| p.to_total().expect("total");
    let adeg_fg = adeg_witness(limits, &tt(&fg), eps)?.degree;
    let bdeg_f1g = bdeg_witness(limits, &f1g, eps)?.degree;
    let bdeg_f1g_rescaled = bdeg_witness(limits, &f1g, rescaled_eps(eps))?.degree;
    let bdeg_f2g = bdeg_witness(limits, &f2g, eps)?.degree;
    let bdeg_pror = bdeg_witness(limits, &pror, eps)?.degree;
    let bdeg_inner = inner
        .iter()
        .map(|p| bdeg_witness(limits, p, eps).map(|w| w.degree))
        .collect::<Result<Vec<_>>>()?;
    let adeg_g = adeg_witness(limits, &tt(g), eps)?.degree;
    Ok(ChainValues {
        a,
        blocks,
        negated,
        adeg_fg,
        bdeg_f1g,
        bdeg_f1g_rescaled,
        bdeg_f2g,
        bdeg_pror,
        bdeg_inner,
        adeg_g,
        same_function,
    })
}

/// Runs the chain and reports each inequality as a check.
pub fn bs_chain(f_name: &str, f: &PartialFn, g_name: &str, g: &PartialFn, limits: &Limits, eps: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let v = chain_values(f, g, limits, eps)?;
    let anchor = "bs composition chain";
    let pair = format!("{f_name}/{g_name}");
    let mut r = VerificationReport::new("bs-chain");
    r.push(
        Check::new(format!("{pair}/0-setup"), anchor, "max-bs input and disjoint minimal blocks")
            .value("a", v.a)
            .value("blocks", &v.blocks)
            .value("b", v.blocks.len())
            .value("negated", v.negated)
            .status(Status::Recorded)
            .timed(start),
    );
    r.push(
        Check::new(format!("{pair}/1-adeg-fg"), anchor, "adeg(f∘g) >= bdeg(f′∘g)")
            .value("adeg_fg", v.adeg_fg)
            .value("bdeg_f1g", v.bdeg_f1g)
            .pass_if(v.adeg_fg >= v.bdeg_f1g),
    );
    r.push(
        Check::new(
            format!("{pair}/1b-adeg-fg-rescaled"),
            anchor,
            "adeg(f∘g) >= bdeg(f′∘g) at the rescaled error 2eps/(1+2eps)",
        )
        .value("adeg_fg", v.adeg_fg)
        .value("bdeg_f1g_rescaled", v.bdeg_f1g_rescaled)
        .value("rescaled_eps", rescaled_eps(eps))
        .pass_if(v.adeg_fg >= v.bdeg_f1g_rescaled),
    );
    r.push(
        Check::new(format!("{pair}/2-restrict"), anchor, "bdeg(f′∘g) >= bdeg(f″∘g)")
            .value("bdeg_f1g", v.bdeg_f1g)
            .value("bdeg_f2g", v.bdeg_f2g)
            .pass_if(v.bdeg_f1g >= v.bdeg_f2g),
    );
    r.push(
        Check::new(format!("{pair}/3-pror-form"), anchor, "f″∘g equals PrOR_b∘(I_i∘g) and their bdeg agree")
            .value("bdeg_f2g", v.bdeg_f2g)
            .value("bdeg_pror", v.bdeg_pror)
            .value("same_function", v.same_function)
            .pass_if(v.same_function && v.bdeg_f2g == v.bdeg_pror),
    );
    for (i, d) in v.bdeg_inner.iter().enumerate() {
        r.push(
            Check::new(format!("{pair}/4-inner-{i}"), anchor, "bdeg(I_i∘g) >= adeg(g)")
                .value("bdeg_inner", d)
                .value("adeg_g", v.adeg_g)
                .pass_if(*d >= v.adeg_g),
        );
    }
    let mut r = r.finish();
    if let Some(c) = r.checks.first_mut() {
        c.runtime = start.elapsed();
    }
    Ok(r)
}
