//! Exact counts of perfect words.

use itertools::Itertools;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sampler::fresh_sites;
use crate::word::{Letter, Word};

pub type BigCount = BigUint;

/// Largest order the depth-first counters accept by default.
pub const DEFAULT_MAX_BRUTE_FORCE_ORDER: usize = 7;

pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigCount::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn catalan(j: u64) -> BigCount {
    binomial(2 * j, j) / (j + 1)
}

/// Number of F-free perfect words of order `n` with exactly `j` hamburgers:
/// choose the hamburger slots, then a Dyck word for each burger type.
pub fn theta0_count_by_j(n: u64, j: u64) -> Result<BigCount> {
    if j > n {
        return Err(Error::InvalidInput(format!("j = {j} exceeds order n = {n}")));
    }
    Ok(binomial(2 * n, 2 * j) * catalan(j) * catalan(n - j))
}

pub fn theta0_count(n: u64) -> BigCount {
    (0..=n)
        .map(|j| binomial(2 * n, 2 * j) * catalan(j) * catalan(n - j))
        .sum()
}

struct Search {
    len: usize,
    k: usize,
    letters: Vec<Letter>,
    hamburgers: Vec<usize>,
    cheeseburgers: Vec<usize>,
    fresh: usize,
}

impl Search {
    fn new(n: usize, k: usize) -> Self {
        Search {
            len: 2 * n,
            k,
            letters: Vec::with_capacity(2 * n),
            hamburgers: Vec::new(),
            cheeseburgers: Vec::new(),
            fresh: 0,
        }
    }

    fn top_is_cheese(&self) -> bool {
        match (self.hamburgers.last(), self.cheeseburgers.last()) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(h), Some(c)) => c > h,
        }
    }

    /// Letters that keep the prefix completable.
    fn moves(&self) -> arrayvec_like::Moves {
        let mut moves = arrayvec_like::Moves::default();
        let t = self.letters.len();
        let remaining = self.len - t;
        let size = self.hamburgers.len() + self.cheeseburgers.len();
        let orders_left = (remaining + size) / 2;
        if self.k - self.fresh > orders_left {
            return moves;
        }
        if size + 2 <= remaining {
            moves.push(Letter::HamburgerProduced);
            moves.push(Letter::CheeseburgerProduced);
        }
        if !self.hamburgers.is_empty() {
            moves.push(Letter::HamburgerOrdered);
        }
        if !self.cheeseburgers.is_empty() {
            moves.push(Letter::CheeseburgerOrdered);
        }
        if self.fresh < self.k && self.top_is_cheese() {
            moves.push(Letter::FreshOrdered);
        }
        moves
    }

    fn push(&mut self, letter: Letter) -> usize {
        let t = self.letters.len();
        self.letters.push(letter);
        match letter {
            Letter::HamburgerProduced => {
                self.hamburgers.push(t);
                0
            }
            Letter::CheeseburgerProduced => {
                self.cheeseburgers.push(t);
                0
            }
            Letter::HamburgerOrdered => self.hamburgers.pop().unwrap(),
            Letter::CheeseburgerOrdered => self.cheeseburgers.pop().unwrap(),
            Letter::FreshOrdered => {
                self.fresh += 1;
                self.cheeseburgers.pop().unwrap()
            }
        }
    }

    fn pop(&mut self, consumed: usize) {
        match self.letters.pop().unwrap() {
            Letter::HamburgerProduced => {
                self.hamburgers.pop();
            }
            Letter::CheeseburgerProduced => {
                self.cheeseburgers.pop();
            }
            Letter::HamburgerOrdered => self.hamburgers.push(consumed),
            Letter::CheeseburgerOrdered => self.cheeseburgers.push(consumed),
            Letter::FreshOrdered => {
                self.fresh -= 1;
                self.cheeseburgers.push(consumed);
            }
        }
    }

    fn is_complete(&self) -> bool {
        self.letters.len() == self.len
            && self.hamburgers.is_empty()
            && self.cheeseburgers.is_empty()
            && self.fresh == self.k
    }

    fn visit<F: FnMut(&[Letter])>(&mut self, f: &mut F) {
        if self.letters.len() == self.len {
            if self.is_complete() {
                f(&self.letters);
            }
            return;
        }
        for letter in self.moves() {
            let consumed = self.push(letter);
            self.visit(f);
            self.pop(consumed);
        }
    }

    fn count(&mut self) -> u64 {
        let mut total = 0u64;
        self.visit(&mut |_| total += 1);
        total
    }

    /// Prefixes of length `depth` that can still be completed.
    fn frontier(&mut self, depth: usize, out: &mut Vec<Vec<Letter>>) {
        if self.letters.len() == depth || self.letters.len() == self.len {
            out.push(self.letters.clone());
            return;
        }
        for letter in self.moves() {
            let consumed = self.push(letter);
            self.frontier(depth, out);
            self.pop(consumed);
        }
    }

    fn replay(n: usize, k: usize, prefix: &[Letter]) -> Search {
        let mut s = Search::new(n, k);
        for &l in prefix {
            s.push(l);
        }
        s
    }
}

// Small fixed-capacity move list; avoids an allocation per search node.
mod arrayvec_like {
    use crate::word::Letter;

    #[derive(Default)]
    pub struct Moves {
        items: [Option<Letter>; 5],
        len: usize,
    }

    impl Moves {
        pub fn push(&mut self, l: Letter) {
            self.items[self.len] = Some(l);
            self.len += 1;
        }
    }

    impl Iterator for Moves {
        type Item = Letter;
        fn next(&mut self) -> Option<Letter> {
            if self.len == 0 {
                return None;
            }
            // Order of visit does not matter for counts; pop from the back.
            self.len -= 1;
            self.items[self.len]
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::ResourceCap(format!(
            "exhaustive search at order {n} exceeds the cap of {cap}"
        )))
    } else {
        Ok(())
    }
}

/// Depth-first count of perfect words of order `n` with exactly `k` fresh
/// orders, all fulfilled by cheeseburgers.
pub fn theta_k_bruteforce(n: usize, k: usize) -> Result<BigCount> {
    theta_k_bruteforce_with_cap(n, k, DEFAULT_MAX_BRUTE_FORCE_ORDER)
}

pub fn theta_k_bruteforce_with_cap(n: usize, k: usize, cap: usize) -> Result<BigCount> {
    check_cap(n, cap)?;
    Ok(BigCount::from(Search::new(n, k).count()))
}

/// Same count with the search tree split at `split_depth` and the subtrees
/// counted on the rayon pool.
pub fn theta_k_bruteforce_parallel(n: usize, k: usize, split_depth: usize) -> Result<BigCount> {
    check_cap(n, DEFAULT_MAX_BRUTE_FORCE_ORDER)?;
    let mut prefixes = Vec::new();
    Search::new(n, k).frontier(split_depth, &mut prefixes);
    let total: u64 = prefixes
        .par_iter()
        .map(|p| Search::replay(n, k, p).count())
        .sum();
    Ok(BigCount::from(total))
}

/// Every word of order `n` with `k` cheeseburger-matched fresh orders.
pub fn perfect_words(n: usize, k: usize) -> Result<Vec<Word>> {
    check_cap(n, DEFAULT_MAX_BRUTE_FORCE_ORDER)?;
    let mut words = Vec::new();
    Search::new(n, k).visit(&mut |letters: &[Letter]| words.push(Word::new(letters.to_vec())));
    words.sort();
    Ok(words)
}

/// Counts pairs (F-free perfect word, k positions) in the image of the
/// canonical injection: every chosen position is a `c` read while a
/// cheeseburger is on top of the stack.
pub fn injection_image_count(n: usize, k: usize) -> Result<BigCount> {
    check_cap(n, DEFAULT_MAX_BRUTE_FORCE_ORDER)?;
    let mut total = 0u64;
    let mut search = Search::new(n, 0);
    search.visit(&mut |letters: &[Letter]| {
        let word = Word::new(letters.to_vec());
        let fresh = fresh_sites(&word);
        total += (0..letters.len())
            .combinations(k)
            .filter(|positions| positions.iter().all(|&i| fresh[i]))
            .count() as u64;
    });
    Ok(BigCount::from(total))
}

/// `count_k / (n^k * count_0)` as an exact rational.
pub fn moment_ratio_from_counts(n: u64, k: u32, count_k: &BigCount, count_0: &BigCount) -> BigRational {
    let denominator = BigCount::from(n).pow(k) * count_0;
    BigRational::new(count_k.clone().into(), denominator.into())
}

/// Exact `|Θ^k_n| / (n^k |Θ⁰_n|)` by exhaustive search.
pub fn moment_ratio(n: usize, k: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidInput("order must be at least 1".into()));
    }
    let count_k = theta_k_bruteforce(n, k)?;
    Ok(moment_ratio_from_counts(n as u64, k as u32, &count_k, &theta0_count(n as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{excess_class, is_double_excursion};

    fn big(v: u64) -> BigCount {
        BigCount::from(v)
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn catalan_matches_convolution_recurrence() {
        let mut cat = vec![big(1)];
        for n in 0..12usize {
            let next: BigCount = (0..=n).map(|i| &cat[i] * &cat[n - i]).sum();
            cat.push(next);
        }
        for (j, c) in cat.iter().enumerate() {
            assert_eq!(&catalan(j as u64), c);
        }
        assert_eq!(catalan(0), big(1));
        assert_eq!(catalan(3), big(5));
        assert_eq!(catalan(10), big(16796));
    }

    #[test]
    fn theta0_by_j_examples() {
        assert_eq!(theta0_count_by_j(1, 1).unwrap(), big(1));
        assert_eq!(theta0_count_by_j(2, 1).unwrap(), big(6));
        assert_eq!(theta0_count_by_j(3, 0).unwrap(), big(5));
        assert!(theta0_count_by_j(2, 3).is_err());
    }

    #[test]
    fn theta0_examples() {
        assert_eq!(theta0_count(1), big(2));
        assert_eq!(theta0_count(2), big(10));
        assert_eq!(theta0_count(3), big(70));
    }

    #[test]
    fn theta0_is_catalan_product() {
        for n in 1..=8 {
            assert_eq!(theta0_count(n), catalan(n) * catalan(n + 1));
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(theta_k_bruteforce(1, 1).unwrap(), big(1));
        assert_eq!(theta_k_bruteforce(2, 1).unwrap(), big(9));
        assert_eq!(theta_k_bruteforce(1, 2).unwrap(), big(0));
        assert!(matches!(theta_k_bruteforce(8, 0), Err(Error::ResourceCap(_))));
    }

    /// Plain enumeration of all 5^(2n) words for tiny n.
    fn naive_count(n: usize, k: usize) -> u64 {
        let len = 2 * n;
        let mut count = 0;
        let mut letters = vec![Letter::HamburgerProduced; len];
        for code in 0..5usize.pow(len as u32) {
            let mut c = code;
            for slot in letters.iter_mut() {
                *slot = Letter::ALL[c % 5];
                c /= 5;
            }
            if excess_class(&Word::new(letters.clone())) == Some(k) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn brute_force_agrees_with_naive_enumeration() {
        for n in 1..=4 {
            for k in 0..=2 {
                assert_eq!(theta_k_bruteforce(n, k).unwrap(), big(naive_count(n, k)), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn parallel_split_matches_sequential() {
        for (n, k) in [(4, 0), (5, 1), (5, 2), (6, 1)] {
            assert_eq!(
                theta_k_bruteforce_parallel(n, k, 4).unwrap(),
                theta_k_bruteforce(n, k).unwrap()
            );
        }
    }

    #[test]
    fn injection_examples() {
        assert_eq!(injection_image_count(2, 1).unwrap(), big(9));
        assert_eq!(injection_image_count(1, 1).unwrap(), big(1));
        for n in 1..=4 {
            assert_eq!(injection_image_count(n, 0).unwrap(), theta0_count(n as u64));
        }
    }

    #[test]
    fn listed_words_are_perfect() {
        let words = perfect_words(3, 0).unwrap();
        assert_eq!(words.len(), 70);
        assert!(words.iter().all(|w| is_double_excursion(w).unwrap()));
        let words = perfect_words(2, 1).unwrap();
        assert_eq!(words.len(), 9);
        assert!(words.iter().all(|w| excess_class(w) == Some(1)));
    }

    #[test]
    fn moment_ratio_examples() {
        assert_eq!(moment_ratio(1, 1).unwrap(), ratio(1, 2));
        assert_eq!(moment_ratio(2, 1).unwrap(), ratio(9, 20));
        for n in 1..=5 {
            assert_eq!(moment_ratio(n, 0).unwrap(), ratio(1, 1));
        }
    }

    #[test]
    fn first_moment_ratio_decreases_toward_a_quarter() {
        let ratios: Vec<BigRational> = (1..=6).map(|n| moment_ratio(n, 1).unwrap()).collect();
        assert_eq!(ratios[0], ratio(1, 2));
        for r in &ratios[1..] {
            assert!(*r > ratio(1, 4) && *r < ratio(1, 2), "{r}");
        }
        for pair in ratios.windows(2) {
            assert!(pair[1] < pair[0]);
        }
    }
}
