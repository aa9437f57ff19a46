//! Range enumeration by depth-first extension of word prefixes.
//!
//! A descendant of a prefix of length `k` has a nonzero coefficient at some
//! exponent `M − 1 ≥ k`, and every coefficient lies in the family's bounds
//! `[c_min, c_max]`. With the top coefficient fixed at `±1` or more, the
//! reachable offsets from the prefix sum form one interval per `M`; those
//! intervals move away from zero geometrically, so only finitely many `M`
//! need testing before a subtree is discarded. Descendants also share the
//! prefix sum modulo `p^k`, which rules out most subtrees once `p^k`
//! exceeds the range length.

use alloc::format;
use alloc::vec::Vec;

use super::{index_to_word, tau_star_indexed, SpectrumElement, SpectrumFamily};
use crate::error::{Error, Result};

/// Bound on `|lo|` and `|hi|` for range enumeration.
pub const RANGE_LIMIT: i128 = 1 << 80;

/// Elements with `lo ≤ λ < hi`, sorted by value.
pub fn enumerate_in_range(
    family: &SpectrumFamily,
    lo: i128,
    hi: i128,
) -> Result<Vec<SpectrumElement>> {
    let q = family.params().q();
    enumerate_values_in_range(family, lo, hi)?
        .into_iter()
        .map(|(_, index)| tau_star_indexed(family, index_to_word(q, index), index))
        .collect()
}

/// `(λ_n, n)` for every element with `lo ≤ λ_n < hi`, sorted by value.
pub fn enumerate_values_in_range(
    family: &SpectrumFamily,
    lo: i128,
    hi: i128,
) -> Result<Vec<(i128, u64)>> {
    if lo > hi {
        return Err(Error::Domain(format!(
            "empty range [{lo}, {hi}) has lo > hi"
        )));
    }
    if lo.abs() > RANGE_LIMIT || hi.abs() > RANGE_LIMIT {
        return Err(Error::Domain(format!("range [{lo}, {hi}) exceeds ±2^80")));
    }
    let p = i128::from(family.params().p());
    let (cmin, cmax) = family.coefficient_bounds();
    let (cmin, cmax) = (i128::from(cmin), i128::from(cmax));
    // The per-exponent intervals must drift away from zero.
    if (cmax >= 1 && cmin <= -(p - 1)) || (cmin <= -1 && cmax >= p - 1) {
        return Err(Error::UnboundedTail);
    }
    if lo == hi {
        return Ok(Vec::new());
    }
    let mut search = Search {
        family,
        p,
        q: family.params().q(),
        lo,
        hi,
        cmin,
        cmax,
        prefix: Vec::new(),
        found: Vec::new(),
    };
    search.visit(0, 1, 0, 1, true)?;
    let mut found = search.found;
    found.sort_unstable();
    Ok(found)
}

/// Fallback for families without a pruning bound: evaluates indices
/// `0..index_cap` and keeps those landing in `[lo, hi)`.
pub fn enumerate_by_sweep(
    family: &SpectrumFamily,
    lo: i128,
    hi: i128,
    index_cap: u64,
) -> Result<Vec<SpectrumElement>> {
    let q = family.params().q();
    let mut out = Vec::new();
    for n in 0..index_cap {
        let elem = tau_star_indexed(family, index_to_word(q, n), n)?;
        if elem.value_i128().is_some_and(|v| lo <= v && v < hi) {
            out.push(elem);
        }
    }
    out.sort_by_key(|e| e.value_i128());
    Ok(out)
}

struct Search<'a> {
    family: &'a SpectrumFamily,
    p: i128,
    q: u32,
    lo: i128,
    hi: i128,
    cmin: i128,
    cmax: i128,
    prefix: Vec<u32>,
    found: Vec<(i128, u64)>,
}

impl Search<'_> {
    /// `sum` is the head sum of the current prefix, `weight = p^k`, `index`
    /// the base-`q` value of the prefix and `q_pow = q^k`.
    fn visit(
        &mut self,
        sum: i128,
        weight: i128,
        index: u64,
        q_pow: u64,
        all_zero: bool,
    ) -> Result<()> {
        let k = self.prefix.len();
        if k > 0 && (self.prefix[k - 1] != 0 || k == 1) {
            self.emit(sum, index)?;
        }
        // The zero word is the one descendant of the root without a nonzero coefficient.
        if k > 0 && !self.descendants_may_hit(sum, weight) {
            return Ok(());
        }
        let next_weight = weight
            .checked_mul(self.p)
            .ok_or(Error::Overflow("prefix weight exceeds i128"))?;
        let next_q_pow = q_pow.checked_mul(u64::from(self.q));
        for digit in 0..self.q {
            let child_zero = all_zero && digit == 0;
            self.prefix.push(digit);
            let value = self.family.checked_head(&self.prefix, child_zero)?;
            let child_sum = i128::from(value)
                .checked_mul(weight)
                .and_then(|v| v.checked_add(sum))
                .ok_or(Error::Overflow("partial sum exceeds i128"))?;
            let child_index = u64::from(digit)
                .checked_mul(q_pow)
                .and_then(|v| v.checked_add(index))
                .ok_or(Error::Overflow("word index exceeds u64"))?;
            let q_pow = next_q_pow.unwrap_or(u64::MAX);
            self.visit(child_sum, next_weight, child_index, q_pow, child_zero)?;
            self.prefix.pop();
        }
        Ok(())
    }

    fn emit(&mut self, head_sum: i128, index: u64) -> Result<()> {
        let len = self.prefix.len();
        let mut value = head_sum;
        for bump in self.family.tail(index, len)? {
            let exponent = (len as u64 - 1).saturating_add(bump.offset);
            let Some(weight) = u32::try_from(exponent)
                .ok()
                .and_then(|e| self.p.checked_pow(e))
            else {
                // Such a bump dwarfs every value inside RANGE_LIMIT.
                return Ok(());
            };
            value = match weight
                .checked_mul(i128::from(bump.value))
                .and_then(|b| b.checked_add(value))
            {
                Some(v) => v,
                None => return Ok(()),
            };
        }
        if self.lo <= value && value < self.hi {
            self.found.push((value, index));
        }
        Ok(())
    }

    /// Whether some word extending the current prefix can land in `[lo, hi)`.
    fn descendants_may_hit(&self, sum: i128, weight: i128) -> bool {
        let target_lo = self.lo - sum;
        let target_hi = self.hi - 1 - sum;
        // Every later term is a multiple of p^k, so descendants stay in the
        // residue class of `sum`.
        let r = target_lo.rem_euclid(weight);
        if r != 0 && weight - r > target_hi - target_lo {
            return false;
        }
        let (cmin, cmax) = (self.cmin, self.cmax);
        // `top = p^{M−1}`, `below = Σ_{k<j<M} p^{j−1}`.
        let mut top = weight;
        let mut below: i128 = 0;
        loop {
            let span = top.saturating_add(below);
            let mut positive_done = true;
            let mut negative_done = true;
            if cmax >= 1 {
                let low = top.saturating_add(cmin.saturating_mul(below));
                let high = cmax.saturating_mul(span);
                if low <= target_hi && high >= target_lo {
                    return true;
                }
                positive_done = low > target_hi;
            }
            if cmin <= -1 {
                let low = cmin.saturating_mul(span);
                let high = cmax.saturating_mul(below).saturating_sub(top);
                if low <= target_hi && high >= target_lo {
                    return true;
                }
                negative_done = high < target_lo;
            }
            if positive_done && negative_done {
                return false;
            }
            below = below.saturating_add(top);
            top = match top.checked_mul(self.p) {
                Some(t) => t,
                None => return false,
            };
        }
    }
}
