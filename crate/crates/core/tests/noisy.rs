use bfclab::noisy::*;
use bfclab::scalar::Scalar;
use bfclab::{zoo, Error, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

fn within_sigmas(observed: f64, mean: f64, sd: f64, k: f64) -> bool {
    (observed - mean).abs() <= k * sd
}

#[test]
fn query_extremes_and_ledger() {
    let mut o = NoisyOracle::from_index(3, 0b101, 1).with_transcript();
    for _ in 0..100 {
        assert!(o.query(0, 1.0).unwrap());
        assert!(!o.query(1, 1.0).unwrap());
    }
    assert_eq!(o.cost(), 200.0);
    for _ in 0..50 {
        o.query(2, 0.0).unwrap();
    }
    assert_eq!(o.cost(), 200.0);
    assert!(o.query(3, 0.5).is_err());
    assert!(o.query(0, 1.5).is_err());
    let tr = o.transcript().unwrap();
    assert_eq!(tr.len(), 250);
    assert_eq!(tr.last().unwrap().cost, o.cost());
    let text = transcript_text(tr);
    assert_eq!(text.lines().nth(1), Some("0 1 1 1"));
}

#[test]
fn agreement_rate_at_bias_point_two() {
    let mut o = NoisyOracle::from_index(1, 1, 42);
    let n = 1_000_000;
    let agree = (0..n).filter(|_| o.query(0, 0.2).unwrap()).count() as f64 / n as f64;
    assert!(within_sigmas(agree, 0.6, (0.6f64 * 0.4 / n as f64).sqrt(), 3.0), "{agree}");
    assert!((o.cost() - n as f64 * 0.04).abs() < 1e-6 * n as f64);
}

#[test]
fn ledger_is_reproducible() {
    let run = |seed| {
        let mut o = NoisyOracle::from_index(4, 0b0110, seed).with_transcript();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let i = rng.gen_range(0..4);
            let g = [1.0, 0.3, -0.25, 0.05][rng.gen_range(0..4)];
            o.query(i, g).unwrap();
        }
        let tr = o.transcript().unwrap().to_vec();
        let sum: f64 = tr.iter().map(|r| r.gamma * r.gamma).sum();
        assert_eq!(sum.to_bits(), o.cost().to_bits());
        tr
    };
    assert_eq!(run(9), run(9));
    assert_ne!(run(9), run(10));
}

/// Bias of the majority of `k` bits of bias `γ`, by enumerating all `2^k`
/// outcomes.
fn majority_bias_enumerated(gamma: &Rational, k: u32) -> Rational {
    let p = (Rational::ratio(1, 1) + gamma.clone()) / Rational::ratio(2, 1);
    let q = Rational::ratio(1, 1) - p.clone();
    let mut win = Rational::ratio(0, 1);
    for mask in 0u32..1 << k {
        let ones = mask.count_ones();
        if 2 * ones > k {
            win += p.powu(ones) * q.powu(k - ones);
        }
    }
    Rational::ratio(2, 1) * win - Rational::ratio(1, 1)
}

#[test]
fn majority_bias_exact_values() {
    let g = Rational::ratio(1, 10);
    assert_eq!(amplify_bias_exact(&g, 1).unwrap(), g);
    let nine = amplify_bias_exact(&g, 9).unwrap();
    assert_eq!(nine, majority_bias_enumerated(&g, 9));
    assert!(nine >= Rational::ratio(1, 10) && nine <= Rational::ratio(9, 10));
    assert!(amplify_bias_exact(&g, 4).is_err());
    let f = amplify_bias_exact(&0.1f64, 9).unwrap();
    assert!((f - nine.to_f64_lossy()).abs() < 1e-14);
}

#[test]
fn majority_bias_bounds_exactly() {
    // √k|γ|/3 ≤ |γ′| ≤ 3√k|γ|, compared after squaring.
    for (num, den) in [(1, 20), (1, 10), (1, 5)] {
        let g = Rational::ratio(num, den);
        let max_k = (den * den / (num * num)) as usize;
        for k in (1..=max_k).step_by(2) {
            let gp = amplify_bias_exact(&g, k).unwrap();
            let kk = Rational::ratio(k as i64, 1);
            let g2 = g.clone() * g.clone();
            let gp2 = gp.clone() * gp.clone();
            assert!(gp > Rational::ratio(0, 1));
            assert!(gp2 >= kk.clone() * g2.clone() / Rational::ratio(9, 1), "γ={g} k={k}");
            assert!(gp2 <= Rational::ratio(9, 1) * kk * g2, "γ={g} k={k}");
        }
    }
}

#[test]
fn majority_sample_costs_k_gamma_squared() {
    let mut o = NoisyOracle::from_index(1, 1, 3);
    amplify_bias_sample(&mut o, 0, 0.1, 9).unwrap();
    assert!((o.cost() - 9.0 * 0.01).abs() < 1e-15);
    assert!(amplify_bias_sample(&mut o, 0, 0.1, 8).is_err());
}

/// Expected length of a `p_up` walk from 0 stopped at `±b`, conditioned on
/// stopping at `+b`, by forward dynamic programming over time.
fn conditional_length_dp(p_up: f64, b: i64) -> f64 {
    let width = (2 * b + 1) as usize;
    let mut mass = vec![0.0; width];
    mass[b as usize] = 1.0;
    let (mut hit, mut weighted) = (0.0, 0.0);
    for step in 1..200_000 {
        let mut next = vec![0.0; width];
        for (pos, &m) in mass.iter().enumerate() {
            if m == 0.0 || pos == 0 || pos == width - 1 {
                continue;
            }
            next[pos + 1] += m * p_up;
            next[pos - 1] += m * (1.0 - p_up);
        }
        hit += next[width - 1];
        weighted += step as f64 * next[width - 1];
        next[0] = 0.0;
        next[width - 1] = 0.0;
        mass = next;
        if mass.iter().sum::<f64>() < 1e-18 {
            break;
        }
    }
    weighted / hit
}

#[test]
fn mu_closed_form() {
    assert!((mu_t(1e-4, 1) - 1.0).abs() < 1e-3);
    // γ̂ = 0.1, t = 4 gives T = 1.
    assert_eq!(walk_length(0.1, 4), 1);
    for b in [1u64, 2, 3, 5] {
        for g in [0.1, 0.2, 0.02] {
            let dp_up = conditional_length_dp((1.0 + g) / 2.0, b as i64);
            let dp_down = conditional_length_dp((1.0 - g) / 2.0, b as i64);
            assert!((mu_t(g, b) - dp_up).abs() < 1e-9, "b={b} g={g}");
            assert!((mu_t(g, b) - dp_down).abs() < 1e-9, "b={b} g={g}");
            assert!((mu_t(g, b) - mu_t_expanded(g, b)).abs() < 1e-9);
        }
    }
}

#[test]
fn mu_ratio_grid() {
    let mut checked = 0;
    for g in [0.02, 0.05, 0.1, 0.2] {
        for t in [4, 16, 64] {
            match mu_ratio_check(g, t) {
                Ok(r) => {
                    assert!(r.holds, "{r:?}");
                    assert!(r.c0 > 0.0 && r.c0.is_finite());
                    checked += 1;
                }
                Err(e) => assert_eq!(walk_length(g, t), 0, "{e}"),
            }
        }
    }
    assert_eq!(checked, 6);
}

#[test]
fn walk_parameter_table() {
    let expect = [
        (0.02, 4, Some(5)),
        (0.02, 16, Some(2)),
        (0.02, 64, Some(1)),
        (0.05, 4, Some(2)),
        (0.05, 16, Some(1)),
        (0.05, 64, None),
        (0.1, 4, Some(1)),
        (0.1, 16, None),
        (0.1, 64, None),
    ];
    for (g, t, big_t) in expect {
        match (WalkParams::new(g, t), big_t) {
            (Ok(p), Some(bt)) => {
                assert_eq!(p.big_t, bt);
                assert!(p.delta > 0.0 && p.delta < 1.0);
                assert!(p.delta_ratio() <= 1.0 / 5.0 + 1e-12, "C = {}", p.delta_ratio());
                assert!(((p.r - 1.0) / (p.r + 1.0) - p.delta).abs() < 1e-12);
            }
            (Err(_), None) => {}
            (r, _) => panic!("γ̂={g} t={t}: {r:?}"),
        }
    }
    assert!(WalkParams::new(0.2, 1).is_err());
    assert!(WalkParams::new(0.0, 4).is_err());
}

#[test]
fn unit_walks_take_one_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for up in [true, false] {
        for _ in 0..100 {
            assert_eq!(sample_conditioned_walk(0.05, 1, up, &mut rng).unwrap(), vec![up]);
        }
    }
}

/// Exact probability of every trace prefix of length at most `len` under
/// the walk conditioned on exiting at `+b`.
fn exact_prefix_law(g: f64, b: i64, len: usize) -> HashMap<Vec<bool>, f64> {
    let p = (1.0 + g) / 2.0;
    let rho: f64 = (1.0 - p) / p;
    let h = |z: i64| (1.0 - rho.powi((z + b) as i32)) / (1.0 - rho.powi((2 * b) as i32));
    let mut out = HashMap::new();
    let mut stack = vec![(Vec::new(), 0i64, 1.0f64)];
    while let Some((path, z, pr)) = stack.pop() {
        if z == b || path.len() == len {
            out.insert(path, pr * h(z) / h(0));
            continue;
        }
        if z == -b {
            continue;
        }
        for up in [true, false] {
            let mut next = path.clone();
            next.push(up);
            let q = if up { p } else { 1.0 - p };
            stack.push((next, z + if up { 1 } else { -1 }, pr * q));
        }
    }
    out
}

fn check_prefix_law(sample: impl Fn(&mut ChaCha8Rng) -> Vec<bool>, g: f64, b: i64, n: usize) {
    let law = exact_prefix_law(g, b, 6);
    assert!((law.values().sum::<f64>() - 1.0).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut counts: HashMap<Vec<bool>, usize> = HashMap::new();
    for _ in 0..n {
        let trace = sample(&mut rng);
        *counts.entry(trace[..trace.len().min(6)].to_vec()).or_default() += 1;
    }
    for key in counts.keys() {
        assert!(law.contains_key(key), "impossible prefix {key:?}");
    }
    for (prefix, p) in law {
        let c = *counts.get(&prefix).unwrap_or(&0) as f64;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        assert!(within_sigmas(c, n as f64 * p, sd, 3.0), "{prefix:?}: {c} vs {}", n as f64 * p);
    }
}

#[test]
fn conditioned_walk_prefix_law() {
    check_prefix_law(|r| sample_conditioned_walk(0.2, 2, true, r).unwrap(), 0.2, 2, 100_000);
}

#[test]
fn drift_sampler_agrees_with_plain_rejection() {
    for b in 1..=3u64 {
        check_prefix_law(|r| sample_conditioned_walk_rejection(0.2, b, true, r).unwrap(), 0.2, b as i64, 20_000);
        check_prefix_law(|r| sample_conditioned_walk(0.2, b, true, r).unwrap(), 0.2, b as i64, 20_000);
        // Exiting at -T: mirror image of the +T law.
        let mirrored = |r: &mut ChaCha8Rng| {
            sample_conditioned_walk(0.2, b, false, r)
                .unwrap()
                .into_iter()
                .map(|s| !s)
                .collect()
        };
        check_prefix_law(mirrored, 0.2, b as i64, 20_000);
        let mirrored_rej = |r: &mut ChaCha8Rng| {
            sample_conditioned_walk_rejection(0.2, b, false, r)
                .unwrap()
                .into_iter()
                .map(|s| !s)
                .collect()
        };
        check_prefix_law(mirrored_rej, 0.2, b as i64, 20_000);
    }
}

#[test]
fn conditioned_walk_mean_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for (g, b) in [(0.2, 2u64), (0.05, 5), (0.02, 10)] {
        for up in [true, false] {
            let n = 20_000;
            let lens: Vec<f64> = (0..n)
                .map(|_| sample_conditioned_walk(g, b, up, &mut rng).unwrap().len() as f64)
                .collect();
            let mean = lens.iter().sum::<f64>() / n as f64;
            let var = lens.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            assert!(within_sigmas(mean, mu_t(g, b), (var / n as f64).sqrt(), 3.0), "g={g} b={b}");
            assert!(lens.iter().all(|&l| l >= b as f64));
        }
    }
}

/// Frequency of ones and lag-1 pair counts of a bit stream against an
/// i.i.d. Bernoulli(p) law: (z-score of ones, χ² over the four pairs).
fn stream_stats(bits: &[bool], p: f64) -> (f64, f64) {
    let n = bits.len() as f64;
    let ones = bits.iter().filter(|&&b| b).count() as f64;
    let z = (ones - n * p) / (n * p * (1.0 - p)).sqrt();
    let mut pairs = [0f64; 4];
    for w in bits.chunks_exact(2) {
        pairs[(w[0] as usize) << 1 | w[1] as usize] += 1.0;
    }
    let m = (bits.len() / 2) as f64;
    let probs = [(1.0 - p) * (1.0 - p), (1.0 - p) * p, p * (1.0 - p), p * p];
    let chi2 = pairs
        .iter()
        .zip(probs)
        .map(|(o, q)| (o - m * q).powi(2) / (m * q))
        .sum();
    (z, chi2)
}

/// 99.73% quantile of χ² with 3 degrees of freedom.
const CHI2_3_THREE_SIGMA: f64 = 14.16;

#[test]
fn generated_bits_match_direct_sampling() {
    for (g, t, seed) in [(0.05, 16, 1u64), (0.005, 16, 2), (0.02, 4, 3)] {
        let params = WalkParams::new(g, t).unwrap();
        let mut oracle = NoisyOracle::from_index(1, 1, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        let out = generate_biased_bits(params, &mut oracle, 0, 1_000_000, &mut rng).unwrap();
        assert!(out.walk_lengths.iter().all(|&l| l as u64 >= params.big_t));
        let p = (1.0 + g) / 2.0;
        let (z, chi2) = stream_stats(&out.bits, p);
        assert!(z.abs() <= 3.0, "γ̂={g} t={t}: z={z}");
        assert!(chi2 <= CHI2_3_THREE_SIGMA, "γ̂={g} t={t}: χ²={chi2}");
        // The same statistics on direct Bernoulli draws.
        let direct: Vec<bool> = (0..out.bits.len()).map(|_| rng.gen::<f64>() < p).collect();
        let (zd, chi2d) = stream_stats(&direct, p);
        assert!(zd.abs() <= 3.0 && chi2d <= CHI2_3_THREE_SIGMA);
        // One 1/√t query per walk.
        assert!((out.cost - out.walk_lengths.len() as f64 / t as f64).abs() < 1e-6);
        // Hidden bit 0: the stream is biased the other way.
        let mut zero = NoisyOracle::from_index(1, 0, seed);
        let flipped = generate_biased_bits(params, &mut zero, 0, 200_000, &mut rng).unwrap();
        let (z0, _) = stream_stats(&flipped.bits, 1.0 - p);
        assert!(z0.abs() <= 3.0);
    }
}

#[test]
fn cost_per_bit_statistics() {
    for g in [0.005, 0.02] {
        let mut closed = Vec::new();
        for t in [4, 16, 64] {
            let params = WalkParams::new(g, t).unwrap();
            let mut oracle = NoisyOracle::from_index(1, 1, t as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(t as u64);
            let out = generate_biased_bits(params, &mut oracle, 0, 400_000, &mut rng).unwrap();
            let walks = out.walk_lengths.len() as f64;
            let lens: Vec<f64> = out.walk_lengths.iter().map(|&l| l as f64).collect();
            let mean = lens.iter().sum::<f64>() / walks;
            let var = lens.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (walks - 1.0);
            assert!(within_sigmas(mean, params.mu(), (var / walks).sqrt(), 3.0));
            let mc = out.cost / out.bits.len() as f64;
            assert!(mc.is_finite() && mc > 0.0);
            assert!((mc / params.cost_per_bit() - 1.0).abs() < 0.05, "{mc} vs {}", params.cost_per_bit());
            closed.push(params.cost_per_bit());
        }
        if g == 0.005 {
            // T is exact on this row, so the only t-dependence is the
            // shrinking correction term.
            assert!(closed.windows(2).all(|w| w[1] < w[0]), "{closed:?}");
        }
    }
}

#[test]
fn identity_with_exact_queries_reads_whole_block() {
    let alg = ExactQueries {
        f: zoo::identity(),
        gamma_hat: 0.25,
    };
    let mut rng = input_rng(1);
    for v in [false, true] {
        let input = gapmaj_input(1, 16, v as usize, &mut rng).unwrap();
        let trial = simulate_on_gapmaj(&alg, 16, &input, 5, true).unwrap();
        assert_eq!(trial.output, v);
        assert_eq!(trial.composed_queries, 16);
        assert_eq!(trial.full_block_queries, 1);
        assert_eq!(trial.noisy_cost, 1.0);
        assert_eq!(trial.transcript.unwrap().len(), 1);
    }
}

#[test]
fn or2_majority_vote_at_t64() {
    let t = 64;
    let alg = MajorityVote {
        f: zoo::or(2).unwrap(),
        gamma_hat: 1.0 / 8.0,
        repeats: 9 * t + 1,
    };
    let mut rng = input_rng(64);
    for x in 0..4 {
        let input = gapmaj_input(2, t, x, &mut rng).unwrap();
        let (summary, runs) = run_trials(&alg, t, &input, x != 0, 1000, 100 + x as u64).unwrap();
        assert!(summary.success_rate >= 2.0 / 3.0, "x={x}: {summary:?}");
        for r in &runs {
            assert_eq!(r.composed_queries, t as u64 * r.full_block_queries + r.single_bit_queries);
            assert_eq!(r.full_block_queries, 0);
            assert_eq!(r.single_bit_queries, 2 * 577);
            assert!(matches!(r.case, BridgeCase::Majority { k: 1, .. }));
        }
    }
}

#[test]
fn walk_bridge_simulation() {
    // γ̂ = 0.02 < 1/√16 with T = 2: queries are served by walks.
    let t = 16;
    let alg = MajorityVote {
        f: zoo::identity(),
        gamma_hat: 0.02,
        repeats: 10_001,
    };
    let mut rng = input_rng(3);
    for v in [false, true] {
        let input = gapmaj_input(1, t, v as usize, &mut rng).unwrap();
        let (summary, runs) = run_trials(&alg, t, &input, v, 100, 9).unwrap();
        assert!(summary.success_rate >= 0.9, "{summary:?}");
        for r in &runs {
            assert!(matches!(r.case, BridgeCase::Walk(_)));
            assert_eq!(r.single_bit_queries, r.walks);
            assert!((r.noisy_cost - r.walks as f64 / t as f64).abs() < 1e-9);
            assert!(r.walks < 10_001);
        }
    }
}

#[test]
fn middle_biases_use_majority_bridge() {
    // 1/(5√t) < γ̂ < 1/√t leaves T = 0, so the majority bridge serves it.
    match BridgeCase::choose(0.1, 16).unwrap() {
        BridgeCase::Majority { k, amplified } => {
            assert_eq!(k, 1);
            assert_eq!(amplified, 0.25);
        }
        c => panic!("{c:?}"),
    }
    match BridgeCase::choose(0.5, 64).unwrap() {
        BridgeCase::Majority { k, amplified } => assert!(k > 1 && amplified >= 0.5),
        c => panic!("{c:?}"),
    }
    // The majority bridge output has bias γ̂ on a promised block.
    let alg = MajorityVote {
        f: zoo::identity(),
        gamma_hat: 0.1,
        repeats: 1,
    };
    let mut rng = input_rng(8);
    let input = gapmaj_input(1, 16, 1, &mut rng).unwrap();
    let (summary, _) = run_trials(&alg, 16, &input, true, 40_000, 1).unwrap();
    let sd = (0.55f64 * 0.45 / 40_000.0).sqrt();
    assert!(within_sigmas(summary.success_rate, 0.55, sd, 3.0), "{summary:?}");
}

struct BadBias;

impl NoisyAlgorithm for BadBias {
    fn arity(&self) -> usize {
        1
    }
    fn gamma_hat(&self) -> f64 {
        0.02
    }
    fn run(&self, oracle: &mut dyn QueryOracle) -> bfclab::Result<bool> {
        oracle.query(0, 0.3)
    }
}

#[test]
fn normal_form_is_enforced() {
    let mut rng = input_rng(0);
    let input = gapmaj_input(1, 16, 1, &mut rng).unwrap();
    let err = simulate_on_gapmaj(&BadBias, 16, &input, 0, false).unwrap_err();
    assert!(matches!(err, Error::BiasNormalForm { .. }));
    let bad_t = simulate_on_gapmaj(&BadBias, 15, &input, 0, false).unwrap_err();
    assert!(matches!(bad_t, Error::InadmissibleGapMaj(15)));
}

#[test]
fn single_bit_queries_have_bias_one_over_root_t() {
    let t = 64;
    let mut rng = input_rng(4);
    let input = gapmaj_input(1, t, 1, &mut rng).unwrap();
    let streams = Streams::new(12);
    let mut o = BlockOracle::new(&input, t, &streams).unwrap();
    let n = 400_000;
    let agree = (0..n).filter(|_| o.query(0, 0.125).unwrap()).count() as f64 / n as f64;
    let p = (1.0 + 0.125) / 2.0;
    assert!(within_sigmas(agree, p, (p * (1.0 - p) / n as f64).sqrt(), 3.0), "{agree}");
    assert!(matches!(o.query(0, 0.5), Err(Error::BiasNormalForm { .. })));
}

#[test]
fn wilson_interval_contains_rate() {
    let (lo, hi) = wilson_interval(90, 100);
    assert!(lo < 0.9 && 0.9 < hi && lo > 0.8 && hi < 0.96);
}
