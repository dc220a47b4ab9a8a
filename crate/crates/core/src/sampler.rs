//! Exact uniform sampling of perfect words.
//!
//! F-free perfect words are sampled by first drawing the number of
//! hamburgers `J` from its exact law, then drawing one uniform Dyck word
//! per burger type (cycle lemma) and a uniform interleaving of the two.
//! Words with `k` fresh orders are obtained by rejection through the
//! canonical injection into (F-free word, k positions).
//!
//! All randomness comes from [`RandomSource`], a ChaCha8 stream generator:
//! a `(seed, stream)` pair fixes the output bit for bit.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::word::{Burger, Letter, StackState, Word};

/// Proposal budget for [`ThetaKSampler`] unless overridden.
pub const DEFAULT_REJECTION_CAP: u64 = 10_000_000;

/// Orders up to this use exact big-integer weights for `J`.
pub const EXACT_J_MAX_ORDER: usize = 4096;

/// Seeded ChaCha8 generator. Independent streams share a seed and differ in
/// the ChaCha stream id.
#[derive(Clone, Debug)]
pub struct RandomSource(ChaCha8Rng);

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::for_stream(seed, 0)
    }

    pub fn for_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource(rng)
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// Splits `trials` into `workers` nearly equal shards.
pub fn shard_sizes(trials: u64, workers: usize) -> Vec<u64> {
    let workers = workers.max(1) as u64;
    (0..workers)
        .map(|w| trials / workers + u64::from(w < trials % workers))
        .collect()
}

/// Runs `f` once per shard, shard `w` on stream `w` of `seed`. Results come
/// back in shard order regardless of scheduling.
pub fn run_sharded<T, F>(seed: u64, workers: usize, trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RandomSource, u64) -> T + Sync,
{
    use rayon::prelude::*;
    let sizes = shard_sizes(trials, workers);
    let job = || {
        sizes
            .par_iter()
            .enumerate()
            .map(|(w, &size)| f(&mut RandomSource::for_stream(seed, w as u64), size))
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

fn random_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bits = bound.bits();
    let digits = bits.div_ceil(32) as usize;
    let top_bits = bits - 32 * (digits as u64 - 1);
    loop {
        let mut d: Vec<u32> = (0..digits).map(|_| rng.next_u32()).collect();
        if top_bits < 32 {
            d[digits - 1] &= (1u32 << top_bits) - 1;
        }
        let r = BigUint::new(d);
        if &r < bound {
            return r;
        }
    }
}

#[derive(Clone, Debug)]
enum JWeights {
    Exact(Vec<BigUint>),
    LogSpace(Vec<f64>),
}

/// Law of the number of hamburgers in a uniform F-free perfect word of
/// order `n`: `P[J = j] ∝ C(n+1, j) C(n+1, j+1)`.
#[derive(Clone, Debug)]
pub struct JDistribution {
    n: usize,
    cumulative: JWeights,
}

impl JDistribution {
    pub fn new(n: usize) -> Self {
        if n <= EXACT_J_MAX_ORDER {
            Self::exact(n)
        } else {
            Self::log_space(n)
        }
    }

    /// Cumulative weights as exact integers.
    pub fn exact(n: usize) -> Self {
        let n1 = n as u64 + 1;
        let mut lower = BigUint::from(1u32); // C(n+1, j)
        let mut upper = BigUint::from(n1); // C(n+1, j+1)
        let mut acc = BigUint::zero();
        let mut cumulative = Vec::with_capacity(n + 1);
        for j in 0..=n as u64 {
            acc += &lower * &upper;
            cumulative.push(acc.clone());
            lower = &upper * 1u32;
            upper = (upper * (n1 - j - 1)) / (j + 2);
        }
        JDistribution { n, cumulative: JWeights::Exact(cumulative) }
    }

    /// Cumulative probabilities built from log weights with compensated
    /// summation.
    pub fn log_space(n: usize) -> Self {
        let nf = n as f64;
        let mut logs = Vec::with_capacity(n + 1);
        let mut lw = (nf + 1.0).ln();
        logs.push(lw);
        for j in 0..n {
            let jf = j as f64;
            lw += ((nf + 1.0 - jf) * (nf - jf)).ln() - ((jf + 1.0) * (jf + 2.0)).ln();
            logs.push(lw);
        }
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let (mut sum, mut carry) = (0.0f64, 0.0f64);
        let mut cumulative = Vec::with_capacity(n + 1);
        for l in logs {
            let y = (l - max).exp() - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
            cumulative.push(sum);
        }
        for c in &mut cumulative {
            *c /= sum;
        }
        JDistribution { n, cumulative: JWeights::LogSpace(cumulative) }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.cumulative, JWeights::Exact(_))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.cumulative {
            JWeights::Exact(c) => {
                let r = random_below(c.last().expect("n + 1 weights"), rng);
                c.partition_point(|x| x <= &r)
            }
            JWeights::LogSpace(c) => {
                let u: f64 = rng.random();
                c.partition_point(|&x| x <= u).min(self.n)
            }
        }
    }

    /// `P[J = j]` for `j = 0..=n` in double precision.
    pub fn probabilities(&self) -> Vec<f64> {
        match &self.cumulative {
            JWeights::Exact(c) => {
                let total = c.last().unwrap();
                let shift = total.bits().saturating_sub(62);
                let scale = (total >> shift).to_f64().unwrap();
                let mut prev = 0.0;
                c.iter()
                    .map(|x| {
                        let cur = (x >> shift).to_f64().unwrap() / scale;
                        let p = cur - prev;
                        prev = cur;
                        p
                    })
                    .collect()
            }
            JWeights::LogSpace(c) => {
                let mut prev = 0.0;
                c.iter()
                    .map(|&x| {
                        let p = x - prev;
                        prev = x;
                        p
                    })
                    .collect()
            }
        }
    }
}

/// Uniform Dyck word of the given semilength; `true` is an up step.
///
/// A uniform arrangement of `s` up steps and `s + 1` down steps is rotated
/// to start right after its first minimum, and the final down step dropped.
pub fn sample_dyck<R: Rng + ?Sized>(semilength: usize, rng: &mut R) -> Vec<bool> {
    let mut out = Vec::with_capacity(2 * semilength);
    fill_dyck(semilength, rng, &mut out, &mut Vec::new());
    out
}

fn fill_dyck<R: Rng + ?Sized>(semilength: usize, rng: &mut R, out: &mut Vec<bool>, scratch: &mut Vec<bool>) {
    out.clear();
    if semilength == 0 {
        return;
    }
    let len = 2 * semilength + 1;
    scratch.clear();
    let mut ups_left = semilength as u64;
    let mut height = 0i64;
    let mut min_height = 0i64;
    let mut min_at = 0usize;
    for i in 0..len {
        let left = (len - i) as u64;
        // Branch-free update; the comparison is a coin flip.
        let up = rng.random_range(0..left) < ups_left;
        scratch.push(up);
        ups_left -= up as u64;
        height += 2 * up as i64 - 1;
        if height < min_height {
            min_height = height;
            min_at = i;
        }
    }
    out.extend_from_slice(&scratch[min_at + 1..]);
    out.extend_from_slice(&scratch[..min_at]);
}

/// Reusable sampler of uniform F-free perfect words of a fixed order.
#[derive(Clone, Debug)]
pub struct Theta0Sampler {
    n: usize,
    j_law: JDistribution,
    hamburgers: Vec<bool>,
    cheeseburgers: Vec<bool>,
    scratch: Vec<bool>,
    indices: Vec<u32>,
    slots: Vec<bool>,
}

impl Theta0Sampler {
    pub fn new(n: usize) -> Self {
        Theta0Sampler {
            n,
            j_law: JDistribution::new(n),
            hamburgers: Vec::new(),
            cheeseburgers: Vec::new(),
            scratch: Vec::new(),
            indices: Vec::new(),
            slots: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn j_law(&self) -> &JDistribution {
        &self.j_law
    }

    /// Writes a fresh sample into `out` and returns its hamburger count.
    pub fn sample_into<R: Rng + ?Sized>(&mut self, rng: &mut R, out: &mut Vec<Letter>) -> usize {
        let n = self.n;
        let len = 2 * n;
        let j = self.j_law.sample(rng);
        fill_dyck(j, rng, &mut self.hamburgers, &mut self.scratch);
        fill_dyck(n - j, rng, &mut self.cheeseburgers, &mut self.scratch);

        // Partial Fisher-Yates over slot indices; pick the smaller side.
        let (picked, picked_is_ham) = if 2 * j <= len - 2 * j { (2 * j, true) } else { (len - 2 * j, false) };
        self.indices.clear();
        self.indices.extend(0..len as u32);
        self.slots.clear();
        self.slots.resize(len, !picked_is_ham);
        for i in 0..picked {
            let r = rng.random_range(i..len);
            self.indices.swap(i, r);
            self.slots[self.indices[i] as usize] = picked_is_ham;
        }

        out.clear();
        const TABLE: [[Letter; 2]; 2] = [
            [Letter::CheeseburgerOrdered, Letter::CheeseburgerProduced],
            [Letter::HamburgerOrdered, Letter::HamburgerProduced],
        ];
        let (mut hi, mut ci) = (0, 0);
        for &is_ham in &self.slots {
            let h = self.hamburgers.get(hi).copied().unwrap_or(false);
            let c = self.cheeseburgers.get(ci).copied().unwrap_or(false);
            let up = (is_ham & h) | (!is_ham & c);
            hi += is_ham as usize;
            ci += !is_ham as usize;
            out.push(TABLE[is_ham as usize][up as usize]);
        }
        j
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Word {
        let mut out = Vec::with_capacity(2 * self.n);
        self.sample_into(rng, &mut out);
        Word::new(out)
    }
}

/// One uniform F-free perfect word of order `n`.
pub fn sample_theta0<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Word {
    Theta0Sampler::new(n).sample(rng)
}

/// Top of the stack just before `position` in an F-free word, found by
/// scanning backwards for the latest burger not yet consumed.
fn top_before_plain(letters: &[Letter], position: usize) -> Option<Burger> {
    let (mut pending_h, mut pending_c) = (0usize, 0usize);
    for &l in letters[..position].iter().rev() {
        match l {
            Letter::HamburgerOrdered => pending_h += 1,
            Letter::CheeseburgerOrdered => pending_c += 1,
            Letter::HamburgerProduced if pending_h == 0 => return Some(Burger::Hamburger),
            Letter::HamburgerProduced => pending_h -= 1,
            Letter::CheeseburgerProduced if pending_c == 0 => return Some(Burger::Cheeseburger),
            Letter::CheeseburgerProduced => pending_c -= 1,
            Letter::FreshOrdered => unreachable!("caller checks for F"),
        }
    }
    None
}

fn top_before(letters: &[Letter], position: usize) -> Option<Burger> {
    if letters[..position].contains(&Letter::FreshOrdered) {
        let mut state = StackState::new();
        for &l in &letters[..position] {
            state.apply(l).ok()?;
        }
        state.top().map(|(_, b)| b)
    } else {
        top_before_plain(letters, position)
    }
}

/// True when the letter at `position` is a cheeseburger order read while a
/// cheeseburger is on top of the stack, so that turning it into `F` keeps
/// the word perfect with that `F` fulfilled by a cheeseburger.
pub fn fresh_site_indicator(word: &Word, position: usize) -> bool {
    let letters = word.letters();
    letters[position] == Letter::CheeseburgerOrdered
        && top_before(letters, position) == Some(Burger::Cheeseburger)
}

/// [`fresh_site_indicator`] at every position, in one forward pass.
pub fn fresh_sites(word: &Word) -> Vec<bool> {
    let mut state = StackState::new();
    word.letters()
        .iter()
        .map(|&l| {
            let fresh = l == Letter::CheeseburgerOrdered
                && matches!(state.top(), Some((_, Burger::Cheeseburger)));
            // Invalid prefixes simply stop producing fresh sites.
            if state.apply(l).is_err() {
                state = StackState::new();
            }
            fresh
        })
        .collect()
}

/// Rejection sampler for perfect words of order `n` with exactly `k` fresh
/// orders, all fulfilled by cheeseburgers.
#[derive(Clone, Debug)]
pub struct ThetaKSampler {
    k: usize,
    cap: u64,
    base: Theta0Sampler,
    buf: Vec<Letter>,
    proposals: u64,
}

impl ThetaKSampler {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Self::with_cap(n, k, DEFAULT_REJECTION_CAP)
    }

    pub fn with_cap(n: usize, k: usize, cap: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("order must be at least 1".into()));
        }
        // Each fresh order needs its own cheeseburger.
        if k > n {
            return Err(Error::InvalidInput(format!("no word of order {n} has {k} fresh orders")));
        }
        Ok(ThetaKSampler { k, cap, base: Theta0Sampler::new(n), buf: Vec::new(), proposals: 0 })
    }

    /// Proposals drawn so far over the sampler's lifetime.
    pub fn proposals(&self) -> u64 {
        self.proposals
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Word> {
        let len = 2 * self.base.order();
        for _ in 0..self.cap {
            self.proposals += 1;
            self.base.sample_into(rng, &mut self.buf);
            let positions = rand::seq::index::sample(rng, len, self.k);
            let letters = &self.buf;
            let accepted = positions.iter().all(|i| letters[i] == Letter::CheeseburgerOrdered)
                && positions
                    .iter()
                    .all(|i| top_before_plain(letters, i) == Some(Burger::Cheeseburger));
            if accepted {
                let mut letters = self.buf.clone();
                for i in positions.iter() {
                    letters[i] = Letter::FreshOrdered;
                }
                return Ok(Word::new(letters));
            }
        }
        Err(Error::ResourceCap(format!(
            "no acceptance within {} proposals",
            self.cap
        )))
    }
}

pub fn sample_theta_k<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Word> {
    ThetaKSampler::new(n, k)?.sample(rng)
}

/// Bernoulli estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub hits: u64,
    pub trials: u64,
    pub value: f64,
    pub std_err: f64,
}

impl Estimate {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        let p = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
        let std_err = if trials == 0 { 0.0 } else { (p * (1.0 - p) / trials as f64).sqrt() };
        Estimate { hits, trials, value: p, std_err }
    }
}

/// Fraction of independent (uniform F-free word, uniform position) trials
/// that land on a fresh site.
pub fn estimate_p<R: Rng + ?Sized>(n: usize, trials: u64, rng: &mut R) -> Estimate {
    let mut sampler = Theta0Sampler::new(n);
    let mut buf = Vec::with_capacity(2 * n);
    let mut hits = 0;
    for _ in 0..trials {
        sampler.sample_into(rng, &mut buf);
        let i = rng.random_range(0..2 * n);
        if buf[i] == Letter::CheeseburgerOrdered && top_before_plain(&buf, i) == Some(Burger::Cheeseburger) {
            hits += 1;
        }
    }
    Estimate::from_counts(hits, trials)
}

/// [`estimate_p`] sharded over `workers` streams of `seed`.
pub fn estimate_p_sharded(n: usize, trials: u64, seed: u64, workers: usize) -> Estimate {
    let hits = run_sharded(seed, workers, trials, |rng, t| estimate_p(n, t, rng).hits)
        .into_iter()
        .sum();
    Estimate::from_counts(hits, trials)
}

/// Fresh-site test at an arbitrary position of an F-free buffer; used by
/// the experiment drivers that reuse their own buffers.
pub(crate) fn is_fresh_plain(letters: &[Letter], position: usize) -> bool {
    letters[position] == Letter::CheeseburgerOrdered
        && top_before_plain(letters, position) == Some(Burger::Cheeseburger)
}
