//! Sparse base-`p` expansions `Σ c_j p^j` with small coefficients.
//!
//! Spectrum elements of the tail-bump families reach `p^{n²}`, far beyond
//! what can be materialized for thousands of indices. Keeping the expansion
//! lets orthogonality be decided from the lowest non-cancelling digits of a
//! difference, without ever building the integer.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::measure::MeasureParams;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitExpansion {
    base: u32,
    /// `(exponent, coefficient)`, strictly increasing exponents, no zero coefficients.
    terms: Vec<(u64, i64)>,
}

impl DigitExpansion {
    /// Builds an expansion from arbitrary `(exponent, coefficient)` pairs,
    /// summing repeated exponents and dropping zeros.
    pub fn new(base: u32, mut terms: Vec<(u64, i64)>) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(u64, i64)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| t.1 != 0);
        Self {
            base,
            terms: merged,
        }
    }

    pub fn zero(base: u32) -> Self {
        Self {
            base,
            terms: Vec::new(),
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn terms(&self) -> &[(u64, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponent of the highest nonzero coefficient.
    pub fn top_exponent(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn to_bigint(&self) -> BigInt {
        let base = BigInt::from(self.base);
        let mut acc = BigInt::zero();
        for &(e, c) in &self.terms {
            let weight: BigInt = if e == 0 {
                BigInt::one()
            } else {
                Pow::pow(&base, e)
            };
            acc += weight * c;
        }
        acc
    }

    /// The value, if it fits in an `i128`.
    pub fn to_i128(&self) -> Option<i128> {
        let base = i128::from(self.base);
        let mut acc: i128 = 0;
        for &(e, c) in &self.terms {
            let e = u32::try_from(e).ok()?;
            let weight = base.checked_pow(e)?;
            acc = acc.checked_add(weight.checked_mul(i128::from(c))?)?;
        }
        Some(acc)
    }

    /// Decides whether `self − other` lies in the zero set of `μ̂` for `params`,
    /// using only the lowest digits of the difference. Both expansions must
    /// use base `p`.
    ///
    /// Returns `None` when the two expansions denote the same integer.
    pub fn difference_in_zero_set(&self, other: &Self, params: &MeasureParams) -> Option<bool> {
        debug_assert_eq!(self.base, params.p());
        debug_assert_eq!(other.base, params.p());
        let p = i128::from(params.p());
        let q = i128::from(params.q());
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0usize, 0usize);
        // Pending coefficient carried into exponent `carry_at`.
        let mut carry: i128 = 0;
        let mut carry_at: u64 = 0;
        loop {
            let next_a = a.get(i).map(|t| t.0);
            let next_b = b.get(j).map(|t| t.0);
            let next_term = match (next_a, next_b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            let exponent = if carry != 0 {
                match next_term {
                    Some(t) if t < carry_at => t,
                    _ => carry_at,
                }
            } else {
                next_term?
            };
            let mut e: i128 = if carry != 0 && exponent == carry_at {
                carry
            } else {
                0
            };
            if next_a == Some(exponent) {
                e += i128::from(a[i].1);
                i += 1;
            }
            if next_b == Some(exponent) {
                e -= i128::from(b[j].1);
                j += 1;
            }
            if carry != 0 && exponent == carry_at {
                carry = 0;
            }
            if e == 0 {
                continue;
            }
            if e.rem_euclid(p) != 0 {
                return Some(e.rem_euclid(q) != 0);
            }
            // The exponent is at least one higher than `exponent`; fold into the next digit.
            carry = e / p;
            carry_at = exponent + 1;
        }
    }

    /// Exact comparison of the integers represented by two expansions with
    /// the same base and coefficients bounded by `base − 1` in magnitude.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        self.to_bigint().cmp(&other.to_bigint())
    }
}
