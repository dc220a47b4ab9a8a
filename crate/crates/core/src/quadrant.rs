//! Simple random walk from (1, 1) killed when it leaves the open quadrant.
//!
//! `t_quad` is the number of steps until a coordinate hits zero and
//! `s_quad` is `x + y` at that moment, i.e. the distance along the axis
//! that was hit.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampler::run_sharded;

/// Largest cutoff for the floating-point forward recursion.
pub const FLOAT_T_MAX_CAP: usize = 4096;
/// Largest cutoff for the exact integer recursion.
pub const EXACT_T_MAX_CAP: usize = 600;
/// Step budget for a single simulated walk.
pub const SAMPLE_STEP_CAP: u64 = 100_000_000;

pub const FOUR_OVER_PI: f64 = 4.0 / PI;

/// Joint law of `(t_quad, s_quad)` up to a time cutoff, split by the axis
/// through which the walk leaves.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadrantDistribution {
    t_max: usize,
    /// `via_x[t][s]`: exit at `(s, 0)` at time `t`.
    via_x: Vec<Vec<f64>>,
    /// `via_y[t][s]`: exit at `(0, s)` at time `t`.
    via_y: Vec<Vec<f64>>,
    /// `P[t_quad > t]` for `t = 0..=t_max`.
    survival: Vec<f64>,
}

impl QuadrantDistribution {
    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn prob(&self, t: usize, s: usize) -> f64 {
        let get = |v: &Vec<Vec<f64>>| v.get(t).and_then(|r| r.get(s)).copied().unwrap_or(0.0);
        get(&self.via_x) + get(&self.via_y)
    }

    pub fn prob_via_x(&self, t: usize, s: usize) -> f64 {
        self.via_x.get(t).and_then(|r| r.get(s)).copied().unwrap_or(0.0)
    }

    pub fn prob_via_y(&self, t: usize, s: usize) -> f64 {
        self.via_y.get(t).and_then(|r| r.get(s)).copied().unwrap_or(0.0)
    }

    /// `P[t_quad > t]`, for `t <= t_max`.
    pub fn survival_after(&self, t: usize) -> f64 {
        self.survival[t]
    }

    /// Mass not absorbed by `t_max`.
    pub fn survival(&self) -> f64 {
        self.survival[self.t_max]
    }

    pub fn time_pmf(&self, t: usize) -> f64 {
        (0..=t + 1).map(|s| self.prob(t, s)).sum()
    }

    /// `P[s_quad = s, t_quad <= t_max]`.
    pub fn truncated_distance_pmf(&self, s: usize) -> f64 {
        (1..=self.t_max).map(|t| self.prob(t, s)).sum()
    }

    pub fn total_mass(&self) -> f64 {
        (1..=self.t_max).map(|t| self.time_pmf(t)).sum::<f64>() + self.survival()
    }

    /// Nonzero entries as `(t, s, probability)`, by time then distance.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for t in 1..=self.t_max {
            for s in 1..=t + 1 {
                let p = self.prob(t, s);
                if p > 0.0 {
                    out.push((t, s, p));
                }
            }
        }
        out
    }
}

/// Forward recursion in double precision.
pub fn exact_dp(t_max: usize) -> Result<QuadrantDistribution> {
    if t_max == 0 {
        return Err(Error::InvalidInput("t_max must be at least 1".into()));
    }
    if t_max > FLOAT_T_MAX_CAP {
        return Err(Error::ResourceCap(format!("t_max {t_max} exceeds {FLOAT_T_MAX_CAP}")));
    }
    let w = t_max + 3;
    let at = |x: usize, y: usize| x * w + y;
    let mut old = vec![0.0f64; w * w];
    let mut new = vec![0.0f64; w * w];
    old[at(1, 1)] = 1.0;
    let mut via_x = vec![Vec::new()];
    let mut via_y = vec![Vec::new()];
    let mut survival = vec![1.0];
    for t in 0..t_max {
        // Before step t + 1 the walk sits on x + y ≡ t (mod 2), x + y <= t + 2.
        let mut ex = vec![0.0; t + 3];
        let mut ey = vec![0.0; t + 3];
        for s in 1..=t + 1 {
            ey[s] = 0.25 * old[at(1, s)];
            ex[s] = 0.25 * old[at(s, 1)];
        }
        let mut alive = 0.0;
        let reach = t + 3;
        for x in 1..reach {
            // Target parity: x + y ≡ t + 1.
            let mut y = if (x + t + 1) % 2 == 0 { 2 } else { 1 };
            while x + y <= reach {
                let v = 0.25
                    * ((old[at(x - 1, y)] + old[at(x, y - 1)]) + (old[at(x + 1, y)] + old[at(x, y + 1)]));
                new[at(x, y)] = v;
                alive += v;
                y += 2;
            }
        }
        // Clear the layer just read so the buffer can be reused.
        for x in 1..reach {
            let mut y = if (x + t) % 2 == 0 { 2 } else { 1 };
            while x + y < reach {
                old[at(x, y)] = 0.0;
                y += 2;
            }
        }
        std::mem::swap(&mut old, &mut new);
        via_x.push(ex);
        via_y.push(ey);
        survival.push(alive);
    }
    Ok(QuadrantDistribution { t_max, via_x, via_y, survival })
}

/// Path counts: exits at time `t` are integers over `4^t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactQuadrantDistribution {
    t_max: usize,
    /// `exits[t][s]`: paths leaving at time `t` with distance `s`.
    exits: Vec<Vec<BigUint>>,
    /// Paths of length `t_max` still inside.
    surviving: BigUint,
}

impl ExactQuadrantDistribution {
    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn exit_paths(&self, t: usize, s: usize) -> BigUint {
        self.exits.get(t).and_then(|r| r.get(s)).cloned().unwrap_or_default()
    }

    pub fn surviving_paths(&self) -> &BigUint {
        &self.surviving
    }

    /// `Σ_t Σ_s exits(t, s) 4^(t_max - t) + surviving == 4^t_max`.
    pub fn conserves_mass(&self) -> bool {
        let mut total = self.surviving.clone();
        for (t, row) in self.exits.iter().enumerate() {
            let scale = BigUint::one() << (2 * (self.t_max - t));
            for c in row {
                total += c * &scale;
            }
        }
        total == BigUint::one() << (2 * self.t_max)
    }

    pub fn prob(&self, t: usize, s: usize) -> f64 {
        scaled(&self.exit_paths(t, s), 2 * t)
    }

    pub fn survival(&self) -> f64 {
        scaled(&self.surviving, 2 * self.t_max)
    }
}

fn scaled(x: &BigUint, log2_denominator: usize) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let shift = x.bits().saturating_sub(64) as usize;
    (x >> shift).to_f64().unwrap() * 2f64.powi(shift as i32 - log2_denominator as i32)
}

/// Forward recursion over path counts with big integers.
pub fn exact_dp_rational(t_max: usize) -> Result<ExactQuadrantDistribution> {
    if t_max == 0 {
        return Err(Error::InvalidInput("t_max must be at least 1".into()));
    }
    if t_max > EXACT_T_MAX_CAP {
        return Err(Error::ResourceCap(format!("exact t_max {t_max} exceeds {EXACT_T_MAX_CAP}")));
    }
    let w = t_max + 3;
    let at = |x: usize, y: usize| x * w + y;
    let mut old = vec![BigUint::zero(); w * w];
    old[at(1, 1)] = BigUint::one();
    let mut exits = vec![Vec::new()];
    for t in 0..t_max {
        let mut row = vec![BigUint::zero(); t + 3];
        for s in 1..=t + 1 {
            row[s] = &old[at(1, s)] + &old[at(s, 1)];
        }
        let mut new = vec![BigUint::zero(); w * w];
        let reach = t + 3;
        for x in 1..reach {
            let mut y = if (x + t + 1) % 2 == 0 { 2 } else { 1 };
            while x + y <= reach {
                new[at(x, y)] = &old[at(x - 1, y)] + &old[at(x, y - 1)] + &old[at(x + 1, y)] + &old[at(x, y + 1)];
                y += 2;
            }
        }
        old = new;
        exits.push(row);
    }
    let surviving = old.iter().sum();
    Ok(ExactQuadrantDistribution { t_max, exits, surviving })
}

/// `P[s_quad = s]` for `s = 1..=max_s` over all times.
///
/// Writing the walk in the rotated coordinates `x + y` and `x - y` and
/// separating variables gives
/// `P[s_quad = s] = (4/π) ∫_0^π r(φ) sin φ sin(sφ) dφ` with
/// `r = a - sqrt(a² - 1)`, `a = 2 - cos φ`, evaluated by composite Simpson.
pub fn exit_distance_pmf(max_s: usize) -> Vec<f64> {
    const INTERVALS: usize = 1 << 16;
    let h = PI / INTERVALS as f64;
    let nodes: Vec<(f64, f64)> = (0..=INTERVALS)
        .map(|i| {
            let phi = i as f64 * h;
            let weight = if i == 0 || i == INTERVALS {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let a = 2.0 - phi.cos();
            let root = 2.0 * (phi / 2.0).sin() * ((3.0 - phi.cos()) / 2.0).sqrt();
            (phi, weight * (a - root) * phi.sin())
        })
        .collect();
    let mut pmf = vec![0.0; max_s + 1];
    for (s, slot) in pmf.iter_mut().enumerate().skip(1) {
        let sum: f64 = nodes.iter().map(|&(phi, g)| g * (s as f64 * phi).sin()).sum();
        *slot = 4.0 / PI * sum * h / 3.0;
    }
    pmf
}

/// `P[s_quad > l]` for `l = 0..=max_l`, over all times.
pub fn exit_distance_tail(max_l: usize) -> Vec<f64> {
    let pmf = exit_distance_pmf(max_l);
    let mut tail = Vec::with_capacity(max_l + 1);
    let mut acc = 1.0;
    for p in &pmf {
        acc -= p;
        tail.push(acc);
    }
    tail
}

/// One walk from (1, 1); `None` if it survives `max_steps` steps.
pub fn sample_exit_within<R: Rng + ?Sized>(rng: &mut R, max_steps: u64) -> Option<(u64, u64)> {
    let (mut x, mut y) = (1i64, 1i64);
    let mut t = 0;
    while t < max_steps {
        // Two random bits per step.
        let mut bits = rng.next_u64();
        for _ in 0..32 {
            t += 1;
            match bits & 3 {
                0 => x += 1,
                1 => x -= 1,
                2 => y += 1,
                _ => y -= 1,
            }
            bits >>= 2;
            if x == 0 || y == 0 {
                return Some((t, (x + y) as u64));
            }
            if t == max_steps {
                return None;
            }
        }
    }
    None
}

pub fn sample_exit<R: Rng + ?Sized>(rng: &mut R) -> Result<(u64, u64)> {
    sample_exit_within(rng, SAMPLE_STEP_CAP)
        .ok_or_else(|| Error::ResourceCap(format!("walk survived {SAMPLE_STEP_CAP} steps")))
}

/// Monte Carlo histogram of `t_quad` on `1..=max_t`; the last slot counts
/// walks still alive after `max_t` steps.
pub fn monte_carlo_time_histogram(samples: u64, max_t: usize, seed: u64, workers: usize) -> Vec<u64> {
    let shards = run_sharded(seed, workers, samples, |rng, n| {
        let mut hist = vec![0u64; max_t + 2];
        for _ in 0..n {
            match sample_exit_within(rng, max_t as u64) {
                Some((t, _)) => hist[t as usize] += 1,
                None => hist[max_t + 1] += 1,
            }
        }
        hist
    });
    let mut total = vec![0u64; max_t + 2];
    for h in shards {
        for (a, b) in total.iter_mut().zip(h) {
            *a += b;
        }
    }
    total
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimeTailRow {
    pub j: usize,
    pub scaled_tail: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceTailRow {
    pub l: usize,
    /// `l² P[s_quad > l]` over all times.
    pub scaled_tail: f64,
    /// `l² P[s_quad > l, t_quad <= t_max]`.
    pub truncated_lower: f64,
    /// The lower value plus `l²` times the unabsorbed mass.
    pub truncated_upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    pub target: f64,
    pub time: Vec<TimeTailRow>,
    pub distance: Vec<DistanceTailRow>,
}

pub const TAIL_DISTANCES: [usize; 8] = [1, 2, 5, 10, 20, 50, 100, 200];

/// `j P[t_quad > j]` and `l² P[s_quad > l]` at a spread of scales, with the
/// limiting constant 4/π for comparison.
pub fn tail_report(dist: &QuadrantDistribution) -> TailReport {
    let mut js: Vec<usize> = [1, 2, 5]
        .iter()
        .flat_map(|&m| (0..6).map(move |e| m * 10usize.pow(e)))
        .filter(|&j| j <= dist.t_max())
        .collect();
    js.push(dist.t_max());
    js.sort_unstable();
    js.dedup();
    let time = js
        .into_iter()
        .map(|j| TimeTailRow { j, scaled_tail: j as f64 * dist.survival_after(j) })
        .collect();

    let all_time = exit_distance_tail(*TAIL_DISTANCES.last().unwrap());
    let mut truncated = vec![0.0; TAIL_DISTANCES.last().unwrap() + 1];
    let mut absorbed = 0.0;
    for (l, slot) in truncated.iter_mut().enumerate() {
        absorbed += dist.truncated_distance_pmf(l);
        *slot = 1.0 - dist.survival() - absorbed;
    }
    let distance = TAIL_DISTANCES
        .iter()
        .map(|&l| {
            let sq = (l * l) as f64;
            DistanceTailRow {
                l,
                scaled_tail: sq * all_time[l],
                truncated_lower: sq * truncated[l],
                truncated_upper: sq * (truncated[l] + dist.survival()),
            }
        })
        .collect();
    TailReport { target: FOUR_OVER_PI, time, distance }
}
