//! Acceptance criteria, one line each. Runs without the test harness so the
//! lines are always printed.

use bfclab::adeg::{adeg, adeg_feasible, adeg_symmetric, build_sink_polynomial, lp_limits};
use bfclab::measures::{block_sensitivity, fractional_block_sensitivity, sensitivity, MeasureLimits};
use bfclab::noisy::{
    amplify_bias_exact, generate_biased_bits, mu_ratio_check, sample_conditioned_walk, walk_length, NoisyOracle,
    WalkParams,
};
use bfclab::scalar::Scalar;
use bfclab::verify::{amplification_bounds, chain_values, simulate_suite};
use bfclab::{zoo, PartialFn, Rational, SymmetricSpectrum, TruthTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::time::{Duration, Instant};

const THIRD: f64 = 1.0 / 3.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------- oracles

/// Every sensitive set at `x`, minimal or not.
fn sensitive_sets(f: &PartialFn, x: usize) -> Vec<usize> {
    let v = f.eval(x);
    (1..f.size()).filter(|&b| matches!(f.eval(x ^ b), Some(w) if Some(!w) == v)).collect()
}

/// Largest number of pairwise disjoint sets, by plain exhaustive recursion.
fn max_disjoint(sets: &[usize], used: usize) -> usize {
    let mut best = 0;
    for (i, &s) in sets.iter().enumerate() {
        if s & used == 0 {
            best = best.max(1 + max_disjoint(&sets[i + 1..], used | s));
        }
    }
    best
}

fn bs_oracle(f: &PartialFn) -> usize {
    f.domain().map(|x| max_disjoint(&sensitive_sets(f, x), 0)).max().unwrap_or(0)
}

fn s_oracle(f: &PartialFn) -> usize {
    f.domain()
        .map(|x| (0..f.arity()).filter(|i| sensitive_sets(f, x).contains(&(1 << i))).count())
        .max()
        .unwrap_or(0)
}

/// Direct evaluation of a monomial-basis polynomial given as (mask, coeff).
fn eval_terms(terms: impl Iterator<Item = (usize, f64)>, x: usize) -> f64 {
    terms.filter(|(m, _)| x & m == *m).map(|(_, c)| c).sum()
}

fn weight(x: usize) -> usize {
    x.count_ones() as usize
}

/// Paturi's parameter recomputed from a value profile.
fn gamma_oracle(profile: &[bool]) -> usize {
    let n = profile.len() - 1;
    (0..n)
        .filter(|&k| profile[k] != profile[k + 1])
        .map(|k| if 2 * k <= n { k } else { n - k })
        .max()
        .expect("non-constant")
}

/// Expected length of the walk conditioned on exiting at +T, by value
/// iteration on the conditioned chain.
fn conditioned_length(g: f64, b: i64) -> f64 {
    let p = (1.0 + g) / 2.0;
    let r = (1.0 - p) / p;
    let h = |z: i64| (1.0 - r.powi((z + b) as i32)) / (1.0 - r.powi((2 * b) as i32));
    let mut e = vec![0.0f64; (2 * b + 1) as usize];
    for _ in 0..200_000 {
        let mut next = e.clone();
        for z in (-b + 1)..b {
            let i = (z + b) as usize;
            let up = p * h(z + 1) / h(z);
            let down = if z - 1 == -b { 0.0 } else { (1.0 - p) * h(z - 1) / h(z) };
            next[i] = 1.0 + up * e[i + 1] + down * e[i - 1];
        }
        let delta = next.iter().zip(&e).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
        e = next;
        if delta < 1e-13 {
            break;
        }
    }
    e[b as usize]
}

/// Exact probabilities of prefixes of length `len` of the walk conditioned
/// to exit at +T, by enumeration of all ±1 paths of that length.
fn prefix_probabilities(g: f64, b: i64, len: usize) -> HashMap<Vec<bool>, f64> {
    let p = (1.0 + g) / 2.0;
    let r = (1.0 - p) / p;
    let h = |z: i64| (1.0 - r.powi((z + b) as i32)) / (1.0 - r.powi((2 * b) as i32));
    let mut out = HashMap::new();
    for bits in 0..1usize << len {
        let mut z = 0i64;
        let mut pr = 1.0;
        let mut path = Vec::new();
        for k in 0..len {
            if z.abs() == b {
                break;
            }
            let up = bits >> k & 1 == 1;
            pr *= if up { p } else { 1.0 - p };
            z += if up { 1 } else { -1 };
            path.push(up);
        }
        if z == -b {
            continue;
        }
        let w = pr * h(z) / h(0);
        // Shorter absorbed paths appear once per suffix; count them once.
        out.entry(path).or_insert(w);
    }
    out
}

/// Upper 0.27% quantile of chi-square with 3 degrees of freedom.
const CHI2_3DF_3SIGMA: f64 = 14.156;

/// z-score of the ones, and chi-square of adjacent disjoint pairs, against
/// i.i.d. Bernoulli(p).
fn bernoulli_stats(bits: &[bool], p: f64) -> (f64, f64) {
    let n = bits.len() as f64;
    let ones = bits.iter().filter(|b| **b).count() as f64;
    let z = (ones - n * p) / (n * p * (1.0 - p)).sqrt();
    let mut cells = [0usize; 4];
    for pair in bits.chunks_exact(2) {
        cells[2 * pair[0] as usize + pair[1] as usize] += 1;
    }
    let m = (bits.len() / 2) as f64;
    let q = 1.0 - p;
    let chi2 = cells
        .iter()
        .zip([q * q, q * p, p * q, p * p])
        .map(|(&o, e)| (o as f64 - m * e).powi(2) / (m * e))
        .sum();
    (z, chi2)
}

// --------------------------------------------------------------- criteria

fn measure_order() -> Outcome {
    let mut fns: Vec<PartialFn> = (0..256u64).map(|b| TruthTable::from_u64(3, b).to_partial()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    fns.extend((0..500).map(|_| TruthTable::from_u64(4, rng.gen::<u16>() as u64).to_partial()));
    let lim = MeasureLimits::default();
    let mut bad = 0;
    for f in &fns {
        let s = sensitivity(f).value;
        let bs = block_sensitivity(f, lim).unwrap().value.blocks.len();
        let fbs = fractional_block_sensitivity(f, lim).unwrap().value.value;
        let ok = s == s_oracle(f) && s <= bs && bs as f64 <= fbs + 1e-9 && fbs <= f.arity() as f64 + 1e-9;
        bad += (!ok || bs != bs_oracle(f)) as usize;
    }
    outcome(bad == 0, format!("{} functions, {bad} mismatches against the set-packing oracle", fns.len()))
}

fn fbs_suite() -> Outcome {
    let lim = MeasureLimits::default();
    let mut bad = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut fns: Vec<PartialFn> = (0..256u64).map(|b| TruthTable::from_u64(3, b).to_partial()).collect();
    fns.extend((0..500).map(|_| TruthTable::from_u64(4, rng.gen::<u16>() as u64).to_partial()));
    for f in &fns {
        let w = fractional_block_sensitivity(f, lim).unwrap().value;
        let bs = bs_oracle(f) as f64;
        // The witness is itself a feasible fractional packing.
        let fam = &w.family;
        let sensitive = sensitive_sets(f, fam.input);
        let loads_ok = (0..f.arity()).all(|i| {
            fam.blocks.iter().zip(&fam.weights).filter(|(b, _)| *b >> i & 1 == 1).map(|(_, p)| p).sum::<f64>()
                <= 1.0 + 1e-9
        });
        let ok = fam.blocks.iter().all(|b| sensitive.contains(b))
            && loads_ok
            && (fam.weights.iter().sum::<f64>() - w.value).abs() < 1e-6
            && w.value + 1e-9 >= bs;
        bad += !ok as usize;
    }
    let mut or_values = Vec::new();
    for n in 1..=6 {
        let v = fractional_block_sensitivity(&zoo::or(n).unwrap(), lim).unwrap().value.value;
        bad += ((v - n as f64).abs() > 1e-6) as usize;
        or_values.push(v);
    }
    outcome(bad == 0, format!("fbs >= bs with checked witnesses on {} functions; fbs(OR_1..6) = {or_values:?}", fns.len()))
}

fn adeg_correctness() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 1..=6 {
        let f = zoo::xor(n).unwrap().to_total().unwrap();
        let below = adeg_feasible(&f, n - 1, THIRD).unwrap();
        let at = adeg_feasible(&f, n, THIRD).unwrap();
        // Any polynomial of degree < n is orthogonal to parity's character,
        // so its best error is 1/2.
        let w = &at.witness;
        let pointwise = (0..1 << n).all(|x| (eval_terms(w.terms().map(|(m, c)| (m, *c)), x) - (weight(x) % 2) as f64).abs() <= THIRD + 1e-7);
        ok &= !below.feasible && (below.error - 0.5).abs() < 1e-6 && at.feasible && pointwise;
    }
    notes.push("XOR_1..6 at n-1 infeasible, at n feasible".to_string());
    let and2 = zoo::and(2).unwrap().to_total().unwrap();
    let a = adeg_feasible(&and2, 1, THIRD).unwrap();
    let worst = (0..4)
        .map(|x| (eval_terms(a.witness.terms().map(|(m, c)| (m, *c)), x) - (x == 3) as u8 as f64).abs())
        .fold(0.0, f64::max);
    let analytic = (0..4).map(|x| (weight(x) as f64 / 3.0 - (x == 3) as u8 as f64).abs()).fold(0.0, f64::max);
    ok &= a.feasible && !adeg_feasible(&and2, 0, THIRD).unwrap().feasible && worst <= THIRD + 1e-7 && analytic <= THIRD + 1e-12;
    notes.push(format!("AND_2 witness error {worst:.4}"));
    let mut or_deg = Vec::new();
    for n in 1..=10 {
        let f = zoo::or(n).unwrap();
        let full = adeg(&f.to_total().unwrap(), THIRD).unwrap();
        let sym = adeg_symmetric(&lp_limits(), &SymmetricSpectrum::of(&f).unwrap(), THIRD).unwrap();
        ok &= full == sym;
        or_deg.push(full);
    }
    ok &= or_deg.windows(2).all(|w| w[0] <= w[1]);
    notes.push(format!("adeg(OR_1..10) = {or_deg:?}"));
    outcome(ok, notes.join("; "))
}

fn paturi_band() -> Outcome {
    let mut ok = true;
    let mut bands = Vec::new();
    for n in 1..=8 {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for bits in 0..1u64 << (n + 1) {
            let profile: Vec<bool> = (0..=n).map(|w| bits >> w & 1 == 1).collect();
            if profile.iter().all(|&v| v == profile[0]) {
                continue;
            }
            let spec = SymmetricSpectrum::from_bits(n, bits);
            let d = adeg_symmetric(&lp_limits(), &spec, THIRD).unwrap();
            if n <= 4 {
                let f = PartialFn::from_fn(n, |x| Some(profile[weight(x)])).unwrap();
                ok &= adeg(&f.to_total().unwrap(), THIRD).unwrap() == d;
            }
            let ratio = d as f64 / ((n * (gamma_oracle(&profile) + 1)) as f64).sqrt();
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        ok &= lo >= 0.2 && hi <= 3.0;
        bands.push(format!("n={n}: [{lo:.3}, {hi:.3}]"));
    }
    outcome(ok, bands.join(" "))
}

fn bs_chain() -> Outcome {
    let outer = [("OR_3", zoo::or(3).unwrap()), ("XOR_2", zoo::xor(2).unwrap()), ("MAJ_3", zoo::maj(3).unwrap())];
    let inner = [("AND_2", zoo::and(2).unwrap()), ("XOR_2", zoo::xor(2).unwrap())];
    let limits = lp_limits();
    let mut literal = Vec::new();
    let mut rescaled = 0;
    let mut structure = true;
    for (fname, f) in &outer {
        for (gname, g) in &inner {
            let v = chain_values(f, g, &limits, THIRD).unwrap();
            structure &= v.same_function && v.blocks.iter().all(|&b| b != 0);
            if v.violations() > 0 {
                literal.push(format!("{fname}∘{gname} adeg {} < bdeg(f′∘g) {}", v.adeg_fg, v.bdeg_f1g));
            }
            rescaled += v.violations_rescaled();
        }
    }
    // OR_3 ∘ XOR_2 has an unbounded degree-2 approximant with error 1/3.
    let x = zoo::or(3).unwrap().compose_uniform(&zoo::xor(2).unwrap()).unwrap();
    let p = |y: usize| (1..=3).map(|i| ((y >> (2 * i - 2)) ^ (y >> (2 * i - 1))) & 1).sum::<usize>() as f64 / 3.0 + THIRD;
    let witness_ok = (0..64).all(|y| (p(y) - x.eval(y).unwrap() as u8 as f64).abs() <= THIRD + 1e-12);
    let detail = format!(
        "same-eps chain: {} violation(s) [{}]; rescaled first step: {rescaled} violations; explicit unbounded witness for OR_3∘XOR_2 verified: {witness_ok}",
        literal.len(),
        literal.join(", ")
    );
    outcome(literal.is_empty() && rescaled == 0 && structure, detail)
}

fn amplification() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut checked = 0;
    for (num, den) in [(1i64, 20i64), (1, 10), (1, 5)] {
        let rows = amplification_bounds(num, den).unwrap();
        let g = num as f64 / den as f64;
        let gr = Rational::new(num.into(), den.into());
        for &(k, v, holds) in &rows {
            // Independent checks: the float bounds and, for small k, the
            // exact rational majority bias.
            let lower = (k as f64).sqrt() * g / 3.0;
            let upper = 3.0 * (k as f64).sqrt() * g;
            ok &= holds && v >= lower - 1e-12 && v <= upper + 1e-12;
            let float = amplify_bias_exact(&g, k).unwrap();
            ok &= (float - v).abs() <= 1e-9;
            if k <= 25 {
                let exact: Rational = amplify_bias_exact(&gr, k).unwrap();
                ok &= (exact.to_f64_lossy() - v).abs() <= 1e-12;
            }
            checked += 1;
        }
    }
    let t = start.elapsed();
    outcome(ok && t < Duration::from_secs(1), format!("{checked} (gamma, k) pairs in {:.0} ms", t.as_secs_f64() * 1e3))
}

fn walk_durations() -> Outcome {
    let mut ok = true;
    let mut cells = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in [0.02, 0.05, 0.1] {
        for t in [4usize, 16, 64] {
            let big_t = walk_length(g, t);
            if big_t == 0 {
                continue;
            }
            let m = mu_ratio_check(g, t).unwrap();
            ok &= m.holds && (m.mu_t - conditioned_length(g, big_t as i64)).abs() < 1e-6;
            let n = 100_000;
            let lens: Vec<f64> = (0..n).map(|_| sample_conditioned_walk(g, big_t, true, &mut rng).unwrap().len() as f64).collect();
            let mean = lens.iter().sum::<f64>() / n as f64;
            let var = lens.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            // At T = 1 every walk has length 1 and the variance is zero.
            let z = if var == 0.0 { 0.0 } else { (mean - m.mu_t) / (var / n as f64).sqrt() };
            ok &= z.abs() <= 3.0 && (var > 0.0 || (mean - m.mu_t).abs() < 1e-9);
            cells.push(format!("({g},{t}) T={big_t} ratio {:.2} z {z:+.2}", m.ratio));
        }
    }
    outcome(ok, cells.join("; "))
}

fn sampling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let law = prefix_probabilities(0.2, 2, 6);
    let n = 100_000;
    let mut counts: HashMap<Vec<bool>, usize> = HashMap::new();
    for _ in 0..n {
        let mut w = sample_conditioned_walk(0.2, 2, true, &mut rng).unwrap();
        w.truncate(6);
        *counts.entry(w).or_default() += 1;
    }
    let total: f64 = law.values().sum();
    let mut outside = 0;
    for (path, &p) in &law {
        let o = counts.remove(path).unwrap_or(0) as f64;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        outside += ((o - n as f64 * p).abs() > 3.0 * sd) as usize;
    }
    outside += counts.len();
    let params = WalkParams::new(0.05, 16).unwrap();
    let mut oracle = NoisyOracle::from_index(1, 1, 9);
    let bits = generate_biased_bits(params, &mut oracle, 0, 1_000_000, &mut rng).unwrap().bits;
    let (z, chi2) = bernoulli_stats(&bits, 0.525);
    let ok = outside == 0 && (total - 1.0).abs() < 1e-9 && z.abs() <= 3.0 && chi2 <= CHI2_3DF_3SIGMA;
    outcome(ok, format!("{} prefix cells, {outside} outside 3 sigma; {} bits, z {z:+.2}, lag-1 chi2 {chi2:.2}", law.len(), bits.len()))
}

fn simulation() -> Outcome {
    let t = 64;
    let out = simulate_suite("or2", &zoo::or(2).unwrap(), t, 1000, 64).unwrap();
    let rates: Vec<f64> = out
        .report
        .checks
        .iter()
        .filter(|c| c.name.ends_with("-success"))
        .map(|c| c.values["summary"]["success_rate"].as_f64().unwrap())
        .collect();
    // Every kept transcript queries in-range variables at bias 1 or at most
    // 1/sqrt(t), with a non-decreasing ledger.
    let q = 1.0 / (t as f64).sqrt();
    let recount = out.transcripts.len() == 4
        && out.transcripts.iter().all(|(_, tr)| {
            !tr.is_empty()
                && tr.iter().all(|r| r.index < 2 && (r.gamma == 1.0 || r.gamma <= q + 1e-12))
                && tr.windows(2).all(|w| w[1].cost >= w[0].cost)
        });
    let ok = out.report.passed() && rates.len() == 4 && rates.iter().all(|&r| r >= 2.0 / 3.0) && recount;
    outcome(ok, format!("success rates {rates:?} over 1000 trials per input; query identity on every transcript: {}", out.report.passed()))
}

fn sink() -> Outcome {
    let p = build_sink_polynomial(4, THIRD).unwrap();
    let f = zoo::sink(4).unwrap();
    let worst = (0..64)
        .map(|x| (eval_terms(p.poly.terms().map(|(m, c)| (m, *c)), x) - f.eval(x).unwrap() as u8 as f64).abs())
        .fold(0.0, f64::max);
    let bs = bs_oracle(&f);
    outcome(worst <= THIRD + 1e-9 && bs >= 3, format!("max error {worst:.5} over 64 inputs, degree {}, bs(SINK_4) = {bs}", p.degree))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("measure order", measure_order),
        ("fbs LP", fbs_suite),
        ("adeg correctness", adeg_correctness),
        ("Paturi band", paturi_band),
        ("bs composition chain", bs_chain),
        ("majority amplification bounds", amplification),
        ("walk durations", walk_durations),
        ("sampling correctness", sampling),
        ("end-to-end simulation", simulation),
        ("SINK polynomial", sink),
    ];
    // The same-eps chain step cannot hold exactly: a total-function
    // approximant may leave [0, 1]. The criterion is reported as failing and
    // the run only requires the rescaled step to hold.
    let known = [5];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let id = i + 1;
        println!(
            "criterion {id:>2} {name}: {} ({:.1} s) {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass && !(known.contains(&id) && o.detail.contains("rescaled first step: 0 violations")) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criterion failure(s)");
        std::process::exit(1);
    }
}
