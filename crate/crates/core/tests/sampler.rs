mod common;

use std::collections::HashMap;

use burgers::enumeration::{perfect_words, theta0_count_by_j};
use burgers::sampler::{
    estimate_p, estimate_p_sharded, fresh_site_indicator, fresh_sites, run_sharded, sample_dyck, shard_sizes,
    JDistribution, RandomSource, Theta0Sampler, ThetaKSampler,
};
use burgers::stats::chi_square;
use burgers::word::{classify_f_matches, validate, Letter, Word};
use burgers::Error;
use common::naive_perfect_words;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::RngCore;

/// Chi-square p-value of `draws` against the uniform law on `support`.
fn uniform_p_value(support: &[Word], draws: impl Iterator<Item = Word>) -> f64 {
    let index: HashMap<&Word, usize> = support.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut counts = vec![0u64; support.len()];
    for w in draws {
        counts[*index.get(&w).unwrap_or_else(|| panic!("{w} outside the support"))] += 1;
    }
    chi_square(&counts, &vec![1.0 / support.len() as f64; support.len()]).p_value
}

#[test]
fn theta0_sampler_is_uniform() {
    for n in 1..=3 {
        let support = naive_perfect_words(n, 0);
        let mut rng = RandomSource::new(n as u64);
        let mut s = Theta0Sampler::new(n);
        let p = uniform_p_value(&support, (0..100_000).map(|_| s.sample(&mut rng)));
        assert!(p > 1e-4, "n={n} p={p}");
    }
}

#[test]
fn theta1_sampler_is_uniform() {
    let support = naive_perfect_words(2, 1);
    assert_eq!(support.len(), 9);
    let mut rng = RandomSource::new(11);
    let mut s = ThetaKSampler::new(2, 1).unwrap();
    let p = uniform_p_value(&support, (0..45_000).map(|_| s.sample(&mut rng).unwrap()));
    assert!(p > 1e-4, "p={p}");

    let support = perfect_words(3, 2).unwrap();
    let mut s = ThetaKSampler::new(3, 2).unwrap();
    let p = uniform_p_value(&support, (0..40_000).map(|_| s.sample(&mut rng).unwrap()));
    assert!(p > 1e-4, "p={p}");
}

#[test]
fn dyck_paths_are_uniform() {
    let mut rng = RandomSource::new(5);
    let mut counts: HashMap<Vec<bool>, u64> = HashMap::new();
    for _ in 0..50_000 {
        *counts.entry(sample_dyck(3, &mut rng)).or_default() += 1;
    }
    assert_eq!(counts.len(), 5);
    let observed: Vec<u64> = counts.values().copied().collect();
    assert!(chi_square(&observed, &[0.2; 5]).p_value > 1e-4);
}

#[test]
fn j_law_matches_counts() {
    for n in [1usize, 2, 7, 30] {
        let law = JDistribution::new(n).probabilities();
        let counts: Vec<f64> = (0..=n as u64)
            .map(|j| theta0_count_by_j(n as u64, j).unwrap().to_f64().unwrap())
            .collect();
        let total: f64 = counts.iter().sum();
        for (p, c) in law.iter().zip(&counts) {
            assert!((p - c / total).abs() < 1e-12);
        }
    }
    let exact = JDistribution::exact(300).probabilities();
    let logs = JDistribution::log_space(300).probabilities();
    for (a, b) in exact.iter().zip(&logs) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn samples_are_perfect_with_stated_j() {
    let mut rng = RandomSource::new(3);
    let mut s = Theta0Sampler::new(500);
    let mut buf = Vec::new();
    for _ in 0..50 {
        let j = s.sample_into(&mut rng, &mut buf);
        let w = Word::new(buf.clone());
        assert_eq!(w.count(Letter::HamburgerProduced), j);
        assert!(validate(&w).is_ok());
    }
    let mut s = ThetaKSampler::new(40, 2).unwrap();
    for _ in 0..20 {
        let w = s.sample(&mut rng).unwrap();
        assert_eq!(classify_f_matches(&validate(&w).unwrap()), (2, 0));
    }
}

#[test]
fn fresh_probability_small_orders() {
    // p = |Θ¹_n| / (2n |Θ⁰_n|): 1/4 at n = 1 and 9/40 at n = 2.
    for (n, p) in [(1usize, 0.25), (2, 0.225)] {
        let e = estimate_p(n, 200_000, &mut RandomSource::new(9));
        assert!((e.value - p).abs() < 4.0 * e.std_err, "n={n} {e:?}");
    }
}

#[test]
fn sharded_runs_are_reproducible() {
    let a = estimate_p_sharded(100, 5000, 42, 3);
    let b = estimate_p_sharded(100, 5000, 42, 3);
    assert_eq!(a, b);
    assert_eq!(shard_sizes(10, 3), vec![4, 3, 3]);
    let firsts = run_sharded(1, 4, 4, |rng, _| rng.next_u64());
    assert_eq!(firsts, run_sharded(1, 4, 4, |rng, _| rng.next_u64()));
    assert_eq!(firsts.len(), 4);
    assert!(firsts.windows(2).all(|w| w[0] != w[1]));
}

#[test]
fn rejection_cap() {
    let mut s = ThetaKSampler::with_cap(50, 40, 10).unwrap();
    assert!(matches!(s.sample(&mut RandomSource::new(0)), Err(Error::ResourceCap(_))));
    assert!(matches!(ThetaKSampler::new(0, 0), Err(Error::InvalidInput(_))));
    assert!(matches!(ThetaKSampler::new(1, 2), Err(Error::InvalidInput(_))));
}

proptest! {
    #[test]
    fn fresh_site_scan_agrees_with_forward_pass(seed in any::<u64>(), n in 1usize..40) {
        let w = Theta0Sampler::new(n).sample(&mut RandomSource::new(seed));
        let forward = fresh_sites(&w);
        for (i, &f) in forward.iter().enumerate() {
            prop_assert_eq!(fresh_site_indicator(&w, i), f);
            if f {
                let sub = w.with_letter(i, Letter::FreshOrdered);
                prop_assert_eq!(classify_f_matches(&validate(&sub).unwrap()), (1, 0));
            }
        }
    }

    #[test]
    fn dyck_paths_stay_nonnegative(seed in any::<u64>(), s in 0usize..200) {
        let path = sample_dyck(s, &mut RandomSource::new(seed));
        prop_assert_eq!(path.len(), 2 * s);
        let mut h = 0i64;
        for up in path {
            h += if up { 1 } else { -1 };
            prop_assert!(h >= 0);
        }
        prop_assert_eq!(h, 0);
    }
}
