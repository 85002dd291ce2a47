//! The Cantor sequence `c` and the difference sequence `d = cₙ + cₙ₊₂`.
//!
//! `c` is produced three ways: the ternary recurrence (`c₀ = 1`, `c₃ₙ = c₃ₙ₊₂ = cₙ`,
//! `c₃ₙ₊₁ = 0`), the two-state automaton read most-significant digit first,
//! and the fixed point of the substitution `a ↦ aba, b ↦ bbb`. They are kept
//! separate so each can check the others.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// A term of the Cantor sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Bit(u8);

impl Bit {
    pub const ZERO: Bit = Bit(0);
    pub const ONE: Bit = Bit(1);

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A term `dₙ = cₙ + cₙ₊₂ ∈ {0, 1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DiffValue(u8);

impl DiffValue {
    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for DiffValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("σ^{k}(a) has 3^{k} letters, above the cap of {cap}")]
    WordTooLong { k: u32, cap: u64 },
}

/// Default cap on the length of `σᵏ(a)`: `3¹⁶` letters.
pub const DEFAULT_WORD_CAP: u64 = 43_046_721;

/// `cₙ` by unrolling the ternary recurrence.
pub fn cantor_term(mut n: u64) -> Bit {
    while n > 0 {
        if n % 3 == 1 {
            return Bit::ZERO;
        }
        n /= 3;
    }
    Bit::ONE
}

/// `cₙ` for an arbitrary-precision index.
pub fn cantor_term_big(n: &BigUint) -> Bit {
    if let Some(small) = n.to_u64() {
        return cantor_term(small);
    }
    if n.to_radix_le(3).contains(&1) {
        Bit::ZERO
    } else {
        Bit::ONE
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum CantorState {
    A,
    B,
}

fn run_cantor_automaton(digits_msd_first: impl Iterator<Item = u8>) -> Bit {
    let mut state = CantorState::A;
    for digit in digits_msd_first {
        state = match (state, digit) {
            (CantorState::A, 1) => CantorState::B,
            (CantorState::A, _) => CantorState::A,
            (CantorState::B, _) => CantorState::B,
        };
    }
    match state {
        CantorState::A => Bit::ONE,
        CantorState::B => Bit::ZERO,
    }
}

/// `cₙ` from the 2-state automaton reading the base-3 digits of `n`
/// most-significant first. Zero has the empty digit string.
pub fn cantor_via_automaton(n: u64) -> Bit {
    cantor_via_automaton_big(&BigUint::from(n))
}

pub fn cantor_via_automaton_big(n: &BigUint) -> Bit {
    if n.is_zero() {
        return run_cantor_automaton(std::iter::empty());
    }
    run_cantor_automaton(n.to_radix_be(3).into_iter())
}

/// `σᵏ(a)` as a string over `{a, b}`, refusing words longer than [`DEFAULT_WORD_CAP`].
pub fn substitution_word(k: u32) -> Result<String, SequenceError> {
    substitution_word_capped(k, DEFAULT_WORD_CAP)
}

pub fn substitution_word_capped(k: u32, cap: u64) -> Result<String, SequenceError> {
    let too_long = SequenceError::WordTooLong { k, cap };
    let len = 3u64.checked_pow(k).ok_or_else(|| too_long.clone())?;
    if len > cap {
        return Err(too_long);
    }
    let mut word = String::from("a");
    for _ in 0..k {
        let mut next = String::with_capacity(word.len() * 3);
        for letter in word.chars() {
            next.push_str(if letter == 'a' { "aba" } else { "bbb" });
        }
        word = next;
    }
    Ok(word)
}

/// `dₙ = cₙ + cₙ₊₂`.
pub fn diff_term(n: u64) -> DiffValue {
    DiffValue(cantor_term(n).0 + cantor_term(n + 2).0)
}

pub fn diff_term_big(n: &BigUint) -> DiffValue {
    let shifted = n + 2u32;
    DiffValue(cantor_term_big(n).0 + cantor_term_big(&shifted).0)
}

/// Which base sequence a Hankel matrix is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Kind {
    /// Hankel matrices of `c`.
    Gamma,
    /// Hankel matrices of `d`.
    Delta,
}

impl Kind {
    /// Term `uₙ` of the base sequence.
    pub fn term(self, n: u64) -> u8 {
        match self {
            Kind::Gamma => cantor_term(n).value(),
            Kind::Delta => diff_term(n).value(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Gamma => "gamma",
            Kind::Delta => "delta",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
