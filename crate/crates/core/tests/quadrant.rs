use burgers::quadrant::{
    exact_dp, exact_dp_rational, exit_distance_pmf, exit_distance_tail, monte_carlo_time_histogram,
    sample_exit_within, tail_report, EXACT_T_MAX_CAP, FLOAT_T_MAX_CAP, FOUR_OVER_PI,
};
use burgers::sampler::RandomSource;
use burgers::stats::{chi_square, total_variation};
use burgers::Error;
use num_bigint::BigUint;
use proptest::prelude::*;

/// Paths of length `t` from (1, 1) that stay in the open quadrant for
/// `t - 1` steps and land on an axis at step `t`, by exhaustive walk.
fn brute_force_exits(t_max: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; t_max + 3]; t_max + 1];
    fn walk(x: i64, y: i64, t: usize, t_max: usize, out: &mut Vec<Vec<u64>>) {
        if t == t_max {
            return;
        }
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (nx, ny) = (x + dx, y + dy);
            if nx == 0 || ny == 0 {
                out[t + 1][(nx + ny) as usize] += 1;
            } else {
                walk(nx, ny, t + 1, t_max, out);
            }
        }
    }
    walk(1, 1, 0, t_max, &mut out);
    out
}

#[test]
fn path_counts_match_brute_force() {
    let t_max = 10;
    let brute = brute_force_exits(t_max);
    let exact = exact_dp_rational(t_max).unwrap();
    for t in 1..=t_max {
        for s in 0..=t + 2 {
            assert_eq!(exact.exit_paths(t, s), BigUint::from(brute[t][s]), "t={t} s={s}");
        }
    }
}

#[test]
fn rational_and_float_agree() {
    let exact = exact_dp_rational(200).unwrap();
    assert!(exact.conserves_mass());
    let float = exact_dp(200).unwrap();
    for t in 1..=200 {
        for s in 0..=t + 2 {
            let (a, b) = (exact.prob(t, s), float.prob(t, s));
            assert!((a - b).abs() <= 1e-12 * a.max(1e-300) || (a - b).abs() < 1e-300, "t={t} s={s}");
        }
    }
    assert!((exact.survival() - float.survival()).abs() < 1e-12);
}

#[test]
fn monte_carlo_exit_times() {
    let max_t = 20;
    let hist = monte_carlo_time_histogram(1_000_000, max_t, 77, 2);
    let dp = exact_dp(max_t).unwrap();
    let mut law: Vec<f64> = (0..=max_t).map(|t| dp.time_pmf(t)).collect();
    law.push(dp.survival_after(max_t));
    assert!(total_variation(&hist, &law) <= 0.003);
    assert!(chi_square(&hist, &law).p_value > 1e-4);
}

#[test]
fn all_time_distance_law() {
    let pmf = exit_distance_pmf(400);
    assert_eq!(pmf[0], 0.0);
    assert!(pmf.iter().all(|&p| p >= -1e-12));
    // The truncated absorption bounds the all-time law from below, and the
    // gap is at most the unabsorbed mass.
    let dp = exact_dp(1000).unwrap();
    let mut gap = 0.0;
    for (s, &p) in pmf.iter().enumerate().skip(1).take(60) {
        let truncated = dp.truncated_distance_pmf(s);
        assert!(p >= truncated - 1e-10, "s={s}");
        gap += p - truncated;
    }
    assert!(gap <= dp.survival() + 1e-9);
    let tail = exit_distance_tail(400);
    assert!((tail[0] - 1.0).abs() < 1e-12);
    assert!(tail.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    let scaled = 400.0 * 400.0 * tail[400];
    assert!((scaled / FOUR_OVER_PI - 1.0).abs() < 0.05, "{scaled}");
}

#[test]
fn tail_report_rows() {
    let dp = exact_dp(500).unwrap();
    let report = tail_report(&dp);
    assert_eq!(report.target, FOUR_OVER_PI);
    assert_eq!(report.time.last().unwrap().j, 500);
    for row in &report.distance {
        assert!(row.truncated_lower <= row.scaled_tail + 1e-9);
        assert!(row.scaled_tail <= row.truncated_upper + 1e-9);
    }
}

#[test]
fn caps() {
    assert!(matches!(exact_dp(FLOAT_T_MAX_CAP + 1), Err(Error::ResourceCap(_))));
    assert!(matches!(exact_dp_rational(EXACT_T_MAX_CAP + 1), Err(Error::ResourceCap(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn axis_symmetry_and_parity(t_max in 1usize..120) {
        let d = exact_dp(t_max).unwrap();
        let mut total = d.survival();
        for t in 1..=t_max {
            for s in 0..=t + 2 {
                prop_assert_eq!(d.prob_via_x(t, s), d.prob_via_y(t, s));
                if (t + s) % 2 == 1 {
                    prop_assert_eq!(d.prob(t, s), 0.0);
                }
                total += d.prob(t, s);
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_exits_land_on_an_axis(seed in any::<u64>()) {
        let mut rng = RandomSource::new(seed);
        if let Some((t, s)) = sample_exit_within(&mut rng, 10_000) {
            prop_assert!(t >= 1 && s >= 1);
            prop_assert_eq!((t + s) % 2, 0);
            prop_assert!(s <= t + 1);
        }
    }
}
