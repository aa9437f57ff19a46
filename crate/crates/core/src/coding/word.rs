use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A finite word `i_1 i_2 … i_N` over `{0, …, q−1}`, stored least significant
/// digit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    digits: Vec<u32>,
}

impl Word {
    /// Builds a word, checking every digit against the alphabet size `q`.
    pub fn new(digits: Vec<u32>, q: u32) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::Form("empty word".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= q) {
            return Err(Error::Form(format!("digit {d} outside 0..{q}")));
        }
        Ok(Self { digits })
    }

    /// The distinguished word `(0)` standing for index 0.
    pub fn zero() -> Self {
        Self { digits: vec![0] }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Nonzero last digit, or the zero word itself.
    pub fn is_canonical(&self) -> bool {
        *self == Self::zero() || self.digits.last().is_some_and(|&d| d != 0)
    }

    /// Length of the longest common prefix of the two words padded with zeros.
    pub fn common_prefix_len(&self, other: &Self) -> usize {
        let n = self.len().max(other.len());
        (0..n)
            .take_while(|&i| self.digits.get(i).unwrap_or(&0) == other.digits.get(i).unwrap_or(&0))
            .count()
    }

    /// Digits as a string, e.g. `"01"` for `(0, 1)`. Digits of alphabets
    /// larger than ten are separated by dots.
    pub fn to_digit_string(&self, q: u32) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        for (i, d) in self.digits.iter().enumerate() {
            if q > 10 && i > 0 {
                out.push('.');
            }
            let _ = write!(out, "{d}");
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

/// Little-endian base-`q` expansion of `n` with nonzero last digit; `(0)` for 0.
pub fn index_to_word(q: u32, mut n: u64) -> Word {
    if n == 0 {
        return Word::zero();
    }
    let q = u64::from(q);
    let mut digits = Vec::new();
    while n > 0 {
        digits.push((n % q) as u32);
        n /= q;
    }
    Word { digits }
}

/// Inverse of [`index_to_word`] on canonical words.
pub fn word_to_index(word: &Word, q: u32) -> Result<u64> {
    if !word.is_canonical() {
        return Err(Error::Form(format!("{word} has a trailing zero")));
    }
    if let Some(d) = word.digits.iter().find(|&&d| d >= q) {
        return Err(Error::Form(format!("digit {d} outside 0..{q}")));
    }
    let q = u64::from(q);
    word.digits.iter().rev().try_fold(0u64, |acc, &d| {
        acc.checked_mul(q)
            .and_then(|v| v.checked_add(u64::from(d)))
            .ok_or(Error::Overflow("word index exceeds u64"))
    })
}
