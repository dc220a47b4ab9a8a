//! The five-letter burger stack machine.
//!
//! A word is read left to right. `H` and `C` put a hamburger or a
//! cheeseburger on top of the stack, `h` and `c` remove the topmost burger
//! of that type, and `F` removes whatever burger is on top. A word is
//! *perfect* when every order is fulfilled and the stack ends empty.
//!
//! Positions are 0-based throughout the crate.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::{Error, Result};

/// One of the five events at the burger counter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    HamburgerProduced,
    CheeseburgerProduced,
    HamburgerOrdered,
    CheeseburgerOrdered,
    FreshOrdered,
}

impl Letter {
    pub const ALL: [Letter; 5] = [
        Letter::HamburgerProduced,
        Letter::CheeseburgerProduced,
        Letter::HamburgerOrdered,
        Letter::CheeseburgerOrdered,
        Letter::FreshOrdered,
    ];

    /// The four letters of F-free words.
    pub const PLAIN: [Letter; 4] = [
        Letter::HamburgerProduced,
        Letter::CheeseburgerProduced,
        Letter::HamburgerOrdered,
        Letter::CheeseburgerOrdered,
    ];

    pub fn to_char(self) -> char {
        match self {
            Letter::HamburgerProduced => 'H',
            Letter::CheeseburgerProduced => 'C',
            Letter::HamburgerOrdered => 'h',
            Letter::CheeseburgerOrdered => 'c',
            Letter::FreshOrdered => 'F',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        Some(match c {
            'H' => Letter::HamburgerProduced,
            'C' => Letter::CheeseburgerProduced,
            'h' => Letter::HamburgerOrdered,
            'c' => Letter::CheeseburgerOrdered,
            'F' => Letter::FreshOrdered,
            _ => return None,
        })
    }

    pub fn is_burger(self) -> bool {
        matches!(self, Letter::HamburgerProduced | Letter::CheeseburgerProduced)
    }

    pub fn is_order(self) -> bool {
        !self.is_burger()
    }

    /// Index into [`Letter::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Burger {
    Hamburger,
    Cheeseburger,
}

/// A finite sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Half the length; the order of a perfect word.
    pub fn order(&self) -> usize {
        self.0.len() / 2
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    /// Copy of the word with one letter replaced.
    pub fn with_letter(&self, position: usize, letter: Letter) -> Word {
        let mut letters = self.0.clone();
        letters[position] = letter;
        Word(letters)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.chars()
            .enumerate()
            .map(|(i, c)| {
                Letter::from_char(c).ok_or_else(|| {
                    Error::InvalidInput(format!("unexpected character {c:?} at position {i}"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Parses the line-oriented word format: one word per line, `#` comments
/// and blank lines skipped.
pub fn parse_words(text: &str) -> Result<Vec<Word>> {
    text.lines()
        .map(str::trim_end)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(str::parse)
        .collect()
}

/// Why a word fails to be perfect.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Reject {
    #[error("order at position {position} has no burger to fulfil it")]
    Underflow { position: usize },
    #[error("{open} burgers left on the stack at the end")]
    Unfinished { open: usize },
}

/// Stack contents after reading a prefix.
///
/// The stack is kept as two position stacks, one per burger type. The
/// overall top of the stack is whichever of the two tops was produced
/// later, so every step is O(1).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StackState {
    hamburgers: Vec<usize>,
    cheeseburgers: Vec<usize>,
    time: usize,
    u: i64,
    v: i64,
}

impl StackState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of letters consumed so far.
    pub fn time(&self) -> usize {
        self.time
    }

    pub fn size(&self) -> usize {
        self.hamburgers.len() + self.cheeseburgers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Burgers minus orders.
    pub fn u(&self) -> i64 {
        self.u
    }

    /// Hamburger/cheeseburger discrepancy.
    pub fn v(&self) -> i64 {
        self.v
    }

    pub fn open_hamburgers(&self) -> usize {
        self.hamburgers.len()
    }

    pub fn open_cheeseburgers(&self) -> usize {
        self.cheeseburgers.len()
    }

    /// Position and type of the top burger.
    pub fn top(&self) -> Option<(usize, Burger)> {
        match (self.hamburgers.last(), self.cheeseburgers.last()) {
            (None, None) => None,
            (Some(&h), None) => Some((h, Burger::Hamburger)),
            (None, Some(&c)) => Some((c, Burger::Cheeseburger)),
            (Some(&h), Some(&c)) if h > c => Some((h, Burger::Hamburger)),
            (Some(_), Some(&c)) => Some((c, Burger::Cheeseburger)),
        }
    }

    /// Stack contents from bottom to top.
    pub fn stack(&self) -> Vec<Burger> {
        let mut all: Vec<(usize, Burger)> = self
            .hamburgers
            .iter()
            .map(|&p| (p, Burger::Hamburger))
            .chain(self.cheeseburgers.iter().map(|&p| (p, Burger::Cheeseburger)))
            .collect();
        all.sort_unstable_by_key(|&(p, _)| p);
        all.into_iter().map(|(_, b)| b).collect()
    }

    /// Reads one letter in place. Orders return the position and type of
    /// the burger they consume.
    pub fn apply(&mut self, letter: Letter) -> std::result::Result<Option<(usize, Burger)>, Reject> {
        let position = self.time;
        let consumed = match letter {
            Letter::HamburgerProduced => {
                self.hamburgers.push(position);
                None
            }
            Letter::CheeseburgerProduced => {
                self.cheeseburgers.push(position);
                None
            }
            Letter::HamburgerOrdered => {
                let p = self.hamburgers.pop().ok_or(Reject::Underflow { position })?;
                Some((p, Burger::Hamburger))
            }
            Letter::CheeseburgerOrdered => {
                let p = self.cheeseburgers.pop().ok_or(Reject::Underflow { position })?;
                Some((p, Burger::Cheeseburger))
            }
            Letter::FreshOrdered => {
                let (p, kind) = self.top().ok_or(Reject::Underflow { position })?;
                match kind {
                    Burger::Hamburger => self.hamburgers.pop(),
                    Burger::Cheeseburger => self.cheeseburgers.pop(),
                };
                Some((p, kind))
            }
        };
        let (du, dv) = match (letter, consumed) {
            (Letter::HamburgerProduced, _) => (1, 1),
            (Letter::CheeseburgerProduced, _) => (1, -1),
            (_, Some((_, Burger::Hamburger))) => (-1, -1),
            (_, Some((_, Burger::Cheeseburger))) => (-1, 1),
            (_, None) => unreachable!("orders always consume"),
        };
        self.u += du;
        self.v += dv;
        self.time += 1;
        Ok(consumed)
    }

    /// Pure single step.
    pub fn step(&self, letter: Letter) -> std::result::Result<StackState, Reject> {
        let mut next = self.clone();
        next.apply(letter)?;
        Ok(next)
    }
}

/// A fresh order together with the burger it consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreshMatch {
    pub order: usize,
    pub burger: usize,
    pub kind: Burger,
}

/// The matching between burgers and the orders that consume them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchPairing {
    partner: Vec<usize>,
    fresh: Vec<FreshMatch>,
}

impl MatchPairing {
    /// The position paired with `position` (in either direction).
    pub fn partner(&self, position: usize) -> usize {
        self.partner[position]
    }

    pub fn partners(&self) -> &[usize] {
        &self.partner
    }

    /// Fresh orders in reading order.
    pub fn fresh_matches(&self) -> &[FreshMatch] {
        &self.fresh
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }
}

/// Runs the stack machine over the whole word and returns the pairing if
/// the word is perfect, or the first failure.
pub fn validate(word: &Word) -> std::result::Result<MatchPairing, Reject> {
    let mut state = StackState::new();
    let mut partner = vec![usize::MAX; word.len()];
    let mut fresh = Vec::new();
    for (i, &letter) in word.letters().iter().enumerate() {
        if let Some((b, kind)) = state.apply(letter)? {
            partner[i] = b;
            partner[b] = i;
            if letter == Letter::FreshOrdered {
                fresh.push(FreshMatch { order: i, burger: b, kind });
            }
        }
    }
    if !state.is_empty() {
        return Err(Reject::Unfinished { open: state.size() });
    }
    Ok(MatchPairing { partner, fresh })
}

/// Counts fresh orders as `(matching cheeseburgers, matching hamburgers)`.
pub fn classify_f_matches(pairing: &MatchPairing) -> (usize, usize) {
    let cheese = pairing
        .fresh
        .iter()
        .filter(|f| f.kind == Burger::Cheeseburger)
        .count();
    (cheese, pairing.fresh.len() - cheese)
}

/// Returns `Some(k)` when the word lies in the class of perfect words with
/// exactly `k` fresh orders, all fulfilled by cheeseburgers.
pub fn excess_class(word: &Word) -> Option<usize> {
    let pairing = validate(word).ok()?;
    match classify_f_matches(&pairing) {
        (k, 0) => Some(k),
        _ => None,
    }
}

/// Loop data read off one fresh order matched to a cheeseburger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LoopRecord {
    pub f_position: usize,
    pub fresh_burger_position: usize,
    /// `ell + 1`.
    pub length: usize,
    /// `1 + ell + 2m`.
    pub area: usize,
    /// Hamburger orders strictly between the pair whose hamburger was
    /// produced before the fresh cheeseburger.
    pub ell: usize,
    /// Half the number of the remaining letters strictly between the pair.
    pub m: usize,
}

/// One record per fresh order, in reading order.
pub fn loop_stats_from_word(word: &Word, pairing: &MatchPairing) -> Result<Vec<LoopRecord>> {
    let letters = word.letters();
    pairing
        .fresh
        .iter()
        .map(|f| {
            if f.kind != Burger::Cheeseburger {
                return Err(Error::InvalidInput(format!(
                    "fresh order at position {} is fulfilled by a hamburger",
                    f.order
                )));
            }
            let (a, b) = (f.burger, f.order);
            let ell = (a + 1..b)
                .filter(|&i| letters[i] == Letter::HamburgerOrdered && pairing.partner[i] < a)
                .count();
            let others = b - a - 1 - ell;
            if others % 2 != 0 {
                return Err(Error::Invariant(format!(
                    "odd number of enclosed letters between {a} and {b}"
                )));
            }
            let m = others / 2;
            Ok(LoopRecord {
                f_position: b,
                fresh_burger_position: a,
                length: ell + 1,
                area: 1 + ell + 2 * m,
                ell,
                m,
            })
        })
        .collect()
}

/// Perfection test for F-free words: each burger type must trace a
/// nonnegative excursion ending at zero.
pub fn is_double_excursion(word: &Word) -> Result<bool> {
    let (mut ham, mut cheese) = (0i64, 0i64);
    for &l in word.letters() {
        match l {
            Letter::HamburgerProduced => ham += 1,
            Letter::CheeseburgerProduced => cheese += 1,
            Letter::HamburgerOrdered => ham -= 1,
            Letter::CheeseburgerOrdered => cheese -= 1,
            Letter::FreshOrdered => {
                return Err(Error::InvalidInput(
                    "double-excursion test is only defined for F-free words".into(),
                ))
            }
        }
        if ham < 0 || cheese < 0 {
            return Ok(false);
        }
    }
    Ok(ham == 0 && cheese == 0)
}
