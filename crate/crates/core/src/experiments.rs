//! Desk-scale experiments: sandpile densities, loop laws, moment ratios,
//! subword statistics and the hamburger count.
//!
//! Every Monte Carlo driver shards its trials with
//! [`run_sharded`](crate::sampler::run_sharded) and merges shard results by
//! addition in shard order, so a report is a pure function of its
//! configuration.

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::enumeration::{moment_ratio, perfect_words, theta0_count, theta_k_bruteforce};
use crate::error::{Error, Result};
use crate::map::{build_map, unicycle_geometry};
use crate::quadrant::{exact_dp, exit_distance_pmf};
use crate::sampler::{is_fresh_plain, run_sharded, Estimate, JDistribution, Theta0Sampler, ThetaKSampler};
use crate::sandpile::densities;
use crate::stats::{chi_square, rational_to_f64, ratio, ser_rational, total_variation, ChiSquare, MeanAcc, MeanSummary};
use crate::word::{loop_stats_from_word, validate, Letter, LoopRecord};

/// Reminder attached to every Monte Carlo report.
pub const TOLERANCE_NOTE: &str =
    "finite-n tolerances in these reports are engineering choices; only the limits are theoretical";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(n: usize, k: usize, samples: u64, seed: u64, workers: usize) -> Self {
        ExperimentConfig { n, k, samples, seed, workers: workers.max(1) }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::Config("at least one sample is needed".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Value {
    pub value: f64,
    pub std_err: f64,
}

fn value(value: f64, std_err: f64) -> Value {
    Value { value, std_err }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub config: ExperimentConfig,
    /// Fraction of (word, position) trials on a fresh site.
    pub p: Estimate,
    /// Fraction of (word, position pair) trials with both on fresh sites.
    pub p2: Estimate,
    pub mean_level: Value,
    pub rho_e: Value,
    /// Mean of `|E| / (2|V|)` over the sampled words.
    pub edge_vertex_ratio: MeanSummary,
    pub rho_v: Value,
    /// `|Θ¹_n| / (n |Θ⁰_n|)`.
    pub moment_ratio_1: Value,
    /// `|Θ²_n| / (n² |Θ⁰_n|)`.
    pub moment_ratio_2: Value,
    /// Implied `Var[level] / n²`.
    pub level_variance_over_n2: f64,
    pub note: &'static str,
}

#[derive(Default)]
struct DensityShard {
    single: u64,
    pair: u64,
    ratio: MeanAcc,
}

/// Monte Carlo estimate of the sandpile densities following the chain
/// `E[level] = E[|U₁|/|T|] = |Θ¹|/|Θ⁰| = 2n p`.
pub fn run_density(cfg: &ExperimentConfig) -> Result<DensityReport> {
    cfg.check()?;
    let n = cfg.n;
    let len = 2 * n;
    if len < 2 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    let shards = run_sharded(cfg.seed, cfg.workers, cfg.samples, |rng, trials| {
        let mut sampler = Theta0Sampler::new(n);
        let mut buf = Vec::with_capacity(len);
        let mut acc = DensityShard::default();
        for _ in 0..trials {
            let j = sampler.sample_into(rng, &mut buf);
            acc.ratio.push(n as f64 / (2.0 * (j as f64 + 1.0)));
            let i = rng.random_range(0..len);
            acc.single += u64::from(is_fresh_plain(&buf, i));
            let a = rng.random_range(0..len);
            let mut b = rng.random_range(0..len - 1);
            if b >= a {
                b += 1;
            }
            acc.pair += u64::from(is_fresh_plain(&buf, a) && is_fresh_plain(&buf, b));
        }
        acc
    });
    let mut total = DensityShard::default();
    for s in &shards {
        total.single += s.single;
        total.pair += s.pair;
        total.ratio.merge(&s.ratio);
    }
    let p = Estimate::from_counts(total.single, cfg.samples);
    let p2 = Estimate::from_counts(total.pair, cfg.samples);
    let nf = n as f64;
    let pairs = nf * (2.0 * nf - 1.0);
    let mean_level = value(2.0 * nf * p.value, 2.0 * nf * p.std_err);
    let rho_e = value(1.0 + 2.0 * p.value, 2.0 * p.std_err);
    let m = total.ratio.summary();
    let rho_v = value(
        2.0 * rho_e.value * m.mean,
        2.0 * ((m.mean * rho_e.std_err).powi(2) + (rho_e.value * m.std_err).powi(2)).sqrt(),
    );
    let second = 2.0 * pairs * p2.value + 2.0 * nf * p.value;
    Ok(DensityReport {
        config: *cfg,
        p,
        p2,
        mean_level,
        rho_e,
        edge_vertex_ratio: m,
        rho_v,
        moment_ratio_1: value(2.0 * p.value, 2.0 * p.std_err),
        moment_ratio_2: value(pairs * p2.value / (nf * nf), pairs * p2.std_err / (nf * nf)),
        level_variance_over_n2: (second - (2.0 * nf * p.value).powi(2)) / (nf * nf),
        note: TOLERANCE_NOTE,
    })
}

/// Exact averages over every F-free word of order `n`, computed by
/// enumerating recurrent sandpiles on each encoded map.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactDensityReport {
    pub n: usize,
    pub words: usize,
    #[serde(serialize_with = "ser_rational")]
    pub mean_level: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub rho_e: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub rho_v: BigRational,
    /// `|Θ¹_n| / |Θ⁰_n|`, which `mean_level` must equal.
    #[serde(serialize_with = "ser_rational")]
    pub level_from_counts: BigRational,
}

pub fn exact_density(n: usize) -> Result<ExactDensityReport> {
    let words = perfect_words(n, 0)?;
    let mut sum_level = BigRational::zero();
    let mut sum_rho_v = BigRational::zero();
    for w in &words {
        let mws = build_map(w, &validate(w)?)?;
        let g = mws.map.to_multigraph(mws.map.vertex_of(mws.map.root_dart()))?;
        let d = densities(&g)?;
        sum_level += &d.mean_mass - BigRational::from_integer(n.into());
        sum_rho_v += d.rho_v;
    }
    let count = ratio(words.len() as u64, 1u64);
    let mean_level = sum_level / &count;
    let rho_e = BigRational::from_integer(1.into()) + &mean_level / BigRational::from_integer(n.into());
    let level_from_counts = BigRational::new(
        theta_k_bruteforce(n, 1)?.into(),
        theta0_count(n as u64).into(),
    );
    Ok(ExactDensityReport {
        n,
        words: words.len(),
        mean_level,
        rho_e,
        rho_v: sum_rho_v / count,
        level_from_counts,
    })
}

/// Largest loop length and area in the compared window.
pub const LOOP_WINDOW: (usize, usize) = (8, 20);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopLawReport {
    pub config: ExperimentConfig,
    pub proposals: u64,
    pub loops: u64,
    /// Samples whose word-based and map-based loops were compared (k = 1).
    pub geometry_checked: u64,
    pub geometry_mismatches: u64,
    pub p_length_1: f64,
    pub p_area_1: f64,
    /// `P[s_quad = 1]`.
    pub quad_s_1: f64,
    /// `P[t_quad = 1]`.
    pub quad_t_1: f64,
    /// Total variation on the window, with everything outside it pooled.
    pub window_tv: f64,
    /// Samples whose fresh intervals are pairwise disjoint.
    pub alternating_fraction: f64,
    /// Pearson correlation of the first two loop lengths (k >= 2).
    pub length_correlation: Option<f64>,
    /// `(L, A, empirical, limit)` on the window.
    pub joint: Vec<(usize, usize, f64, f64)>,
    pub note: &'static str,
}

#[derive(Default)]
struct LoopShard {
    proposals: u64,
    records: Vec<Vec<LoopRecord>>,
    checked: u64,
    mismatches: u64,
}

fn alternating(records: &[LoopRecord]) -> bool {
    records
        .windows(2)
        .all(|w| w[0].f_position < w[1].fresh_burger_position)
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Samples words with `k` fresh orders and compares their loops with the
/// quadrant exit law.
pub fn run_loop_law(cfg: &ExperimentConfig) -> Result<LoopLawReport> {
    cfg.check()?;
    if cfg.k == 0 {
        return Err(Error::Config("loop law needs k >= 1".into()));
    }
    let (n, k) = (cfg.n, cfg.k);
    let shards = run_sharded(cfg.seed, cfg.workers, cfg.samples, |rng, count| -> Result<LoopShard> {
        let mut sampler = ThetaKSampler::new(n, k)?;
        let mut acc = LoopShard::default();
        for _ in 0..count {
            let w = sampler.sample(rng)?;
            let pairing = validate(&w)?;
            let records = loop_stats_from_word(&w, &pairing)?;
            if k == 1 {
                let mws = build_map(&w, &pairing)?;
                let geometric = unicycle_geometry(&mws)?;
                acc.checked += 1;
                acc.mismatches += u64::from(geometric != (records[0].length, records[0].area));
            }
            acc.records.push(records);
        }
        acc.proposals = sampler.proposals();
        Ok(acc)
    });
    let mut total = LoopShard::default();
    for s in shards {
        let s = s?;
        total.proposals += s.proposals;
        total.checked += s.checked;
        total.mismatches += s.mismatches;
        total.records.extend(s.records);
    }

    let (lmax, amax) = LOOP_WINDOW;
    let dp = exact_dp(amax)?;
    let all: Vec<&LoopRecord> = total.records.iter().flatten().collect();
    let loops = all.len() as u64;
    let mut observed = vec![0u64; (lmax + 1) * (amax + 1) + 1];
    for r in &all {
        let cell = if r.length <= lmax && r.area <= amax {
            r.length * (amax + 1) + r.area
        } else {
            observed.len() - 1
        };
        observed[cell] += 1;
    }
    let mut limit = vec![0.0; observed.len()];
    let mut joint = Vec::new();
    for l in 1..=lmax {
        for a in 1..=amax {
            let q = dp.prob(a, l);
            limit[l * (amax + 1) + a] = q;
            let e = observed[l * (amax + 1) + a] as f64 / loops as f64;
            if q > 0.0 || e > 0.0 {
                joint.push((l, a, e, q));
            }
        }
    }
    let inside: f64 = limit.iter().sum();
    *limit.last_mut().unwrap() = 1.0 - inside;
    let window_tv = total_variation(&observed, &limit);

    let frac = |f: &dyn Fn(&LoopRecord) -> bool| all.iter().filter(|r| f(r)).count() as f64 / loops as f64;
    let samples = total.records.len() as f64;
    let alternating_fraction = total.records.iter().filter(|r| alternating(r)).count() as f64 / samples;
    let length_correlation = (k >= 2).then(|| {
        let xs: Vec<f64> = total.records.iter().map(|r| r[0].length as f64).collect();
        let ys: Vec<f64> = total.records.iter().map(|r| r[1].length as f64).collect();
        pearson(&xs, &ys)
    });
    Ok(LoopLawReport {
        config: *cfg,
        proposals: total.proposals,
        loops,
        geometry_checked: total.checked,
        geometry_mismatches: total.mismatches,
        p_length_1: frac(&|r| r.length == 1),
        p_area_1: frac(&|r| r.area == 1),
        quad_s_1: exit_distance_pmf(1)[1],
        quad_t_1: dp.time_pmf(1),
        window_tv,
        alternating_fraction,
        length_correlation,
        joint,
        note: TOLERANCE_NOTE,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub n: usize,
    pub k: usize,
    /// `exact` or `monte-carlo`.
    pub mode: &'static str,
    pub value: f64,
    pub std_err: f64,
    /// Exact value as `p/q` when available.
    pub exact: Option<String>,
    /// `1 / (k! 4^k)`.
    pub target: f64,
}

pub fn moment_target(k: usize) -> f64 {
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    1.0 / (fact * 4f64.powi(k as i32))
}

/// `|Θ^k_n| / (n^k |Θ⁰_n|)` for every requested pair: exact up to
/// `exact_max_n`, Monte Carlo above.
pub fn run_moment_table(
    ns: &[usize],
    ks: &[usize],
    exact_max_n: usize,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<MomentRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        let mc = if n > exact_max_n && ks.iter().any(|&k| k > 0) {
            Some(run_density(&ExperimentConfig::new(n, 0, trials, seed, workers))?)
        } else {
            None
        };
        for &k in ks {
            let row = if k == 0 {
                MomentRow { n, k, mode: "exact", value: 1.0, std_err: 0.0, exact: Some("1".into()), target: 1.0 }
            } else if let Some(report) = &mc {
                let v = match k {
                    1 => report.moment_ratio_1,
                    2 => report.moment_ratio_2,
                    _ => return Err(Error::Config(format!("Monte Carlo moments only cover k <= 2, got {k}"))),
                };
                MomentRow { n, k, mode: "monte-carlo", value: v.value, std_err: v.std_err, exact: None, target: moment_target(k) }
            } else {
                let r = moment_ratio(n, k)?;
                MomentRow {
                    n,
                    k,
                    mode: "exact",
                    value: rational_to_f64(&r),
                    std_err: 0.0,
                    exact: Some(r.to_string()),
                    target: moment_target(k),
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubwordReport {
    pub config: ExperimentConfig,
    pub s: usize,
    /// Trials whose position was too close to the start for a full window.
    pub short: u64,
    /// Letter counts in the order H, C, h, c over all windows.
    pub letters: [u64; 4],
    pub letter_tv: f64,
    pub letter_chi_square: ChiSquare,
    pub bigram_tv: f64,
    pub bigram_chi_square: ChiSquare,
    /// Count of each letter at the window's last position.
    pub last_letters: [u64; 4],
    pub note: &'static str,
}

/// Suffix windows of length `s` ending at uniform positions of uniform
/// F-free words, compared letter by letter with i.i.d. uniform letters.
pub fn run_subword_uniformity(cfg: &ExperimentConfig, s: usize) -> Result<SubwordReport> {
    cfg.check()?;
    if s == 0 || s * s * 100 > cfg.n {
        return Err(Error::Config(format!(
            "window length {s} is outside the regime s² <= n/100 for n = {}",
            cfg.n
        )));
    }
    let n = cfg.n;
    let shards = run_sharded(cfg.seed, cfg.workers, cfg.samples, |rng, trials| {
        let mut sampler = Theta0Sampler::new(n);
        let mut buf = Vec::new();
        let mut letters = [0u64; 4];
        let mut last = [0u64; 4];
        let mut bigrams = [0u64; 16];
        let mut short = 0;
        for _ in 0..trials {
            sampler.sample_into(rng, &mut buf);
            let i = rng.random_range(0..2 * n);
            if i + 1 < s {
                short += 1;
                continue;
            }
            let window = &buf[i + 1 - s..=i];
            for l in window {
                letters[l.index()] += 1;
            }
            for pair in window.windows(2) {
                bigrams[4 * pair[0].index() + pair[1].index()] += 1;
            }
            last[window[s - 1].index()] += 1;
        }
        (letters, bigrams, last, short)
    });
    let (mut letters, mut bigrams, mut last, mut short) = ([0u64; 4], [0u64; 16], [0u64; 4], 0);
    for (l, b, z, sh) in shards {
        (0..4).for_each(|i| letters[i] += l[i]);
        (0..16).for_each(|i| bigrams[i] += b[i]);
        (0..4).for_each(|i| last[i] += z[i]);
        short += sh;
    }
    Ok(SubwordReport {
        config: *cfg,
        s,
        short,
        letters,
        letter_tv: total_variation(&letters, &[0.25; 4]),
        letter_chi_square: chi_square(&letters, &[0.25; 4]),
        bigram_tv: total_variation(&bigrams, &[1.0 / 16.0; 16]),
        bigram_chi_square: chi_square(&bigrams, &[1.0 / 16.0; 16]),
        last_letters: last,
        note: TOLERANCE_NOTE,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JDistributionReport {
    pub config: ExperimentConfig,
    pub histogram: Vec<u64>,
    /// Goodness of fit against the exact law, reported for n <= 50.
    pub chi_square: Option<ChiSquare>,
    /// Mean of `|E| / (2|V|)` and of its square.
    pub ratio_moment_1: MeanSummary,
    pub ratio_moment_2: MeanSummary,
    pub note: &'static str,
}

pub const J_CHI_SQUARE_MAX_N: usize = 50;

/// Hamburger counts of sampled F-free words against their exact law.
pub fn run_j_distribution(cfg: &ExperimentConfig) -> Result<JDistributionReport> {
    cfg.check()?;
    let n = cfg.n;
    let law = JDistribution::new(n);
    let shards = run_sharded(cfg.seed, cfg.workers, cfg.samples, |rng, trials| {
        let mut sampler = Theta0Sampler::new(n);
        let mut buf = Vec::new();
        let mut hist = vec![0u64; n + 1];
        let (mut m1, mut m2) = (MeanAcc::default(), MeanAcc::default());
        for _ in 0..trials {
            sampler.sample_into(rng, &mut buf);
            // Counted from the word itself, not the sampler's own draw.
            let j = hamburger_count(&buf);
            hist[j] += 1;
            let r = n as f64 / (2.0 * (j as f64 + 1.0));
            m1.push(r);
            m2.push(r * r);
        }
        (hist, m1, m2)
    });
    let mut histogram = vec![0u64; n + 1];
    let (mut m1, mut m2) = (MeanAcc::default(), MeanAcc::default());
    for (h, a, b) in &shards {
        for (x, y) in histogram.iter_mut().zip(h) {
            *x += y;
        }
        m1.merge(a);
        m2.merge(b);
    }
    let chi = (n <= J_CHI_SQUARE_MAX_N).then(|| chi_square(&histogram, &law.probabilities()));
    Ok(JDistributionReport {
        config: *cfg,
        histogram,
        chi_square: chi,
        ratio_moment_1: m1.summary(),
        ratio_moment_2: m2.summary(),
        note: TOLERANCE_NOTE,
    })
}

/// Hamburgers in a word; `|V| = J + 1` for its map.
pub fn hamburger_count(letters: &[Letter]) -> usize {
    letters.iter().filter(|&&l| l == Letter::HamburgerProduced).count()
}
