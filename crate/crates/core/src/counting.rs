//! Window counts `#(Λ ∩ [m, m+n))`, their suprema, the `q^k` bound for
//! windows of length `p^k`, and a finite maximality probe.

use alloc::format;
use alloc::vec::Vec;

use crate::coding::{enumerate_values_in_range, SpectrumFamily};
use crate::error::{Error, Result};
use crate::measure::{zero_set_contains_i128, MeasureParams};

/// `#(Λ ∩ [m, m + n))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowCount {
    pub m: i128,
    pub n: i128,
    pub count: usize,
}

/// Exact count over the half-open window `[m, m + n)`.
pub fn count_in_interval(family: &SpectrumFamily, m: i128, n: i128) -> Result<WindowCount> {
    if n < 1 {
        return Err(Error::Domain(format!(
            "window length must be positive, got {n}"
        )));
    }
    let hi = m
        .checked_add(n)
        .ok_or(Error::Overflow("window end exceeds i128"))?;
    let count = enumerate_values_in_range(family, m, hi)?.len();
    Ok(WindowCount { m, n, count })
}

/// Number of sorted `points` in `[m, m + n)`.
pub fn count_sorted(points: &[i128], m: i128, n: i128) -> usize {
    let start = points.partition_point(|&x| x < m);
    let end = points.partition_point(|&x| x < m + n);
    end - start
}

/// Largest count over windows `[m, m + n) ⊆ [lo, hi]` (closed outer range),
/// given the sorted points inside `[lo, hi]`. Ties go to the leftmost `m`.
///
/// Only windows starting at a point, plus the rightmost admissible window,
/// can be maximal. A window longer than the range is clipped to the whole
/// range and reported at `m = lo`.
pub fn sup_count_sorted(points: &[i128], n: i128, lo: i128, hi: i128) -> Option<WindowCount> {
    if points.is_empty() {
        return None;
    }
    let last_start = hi - n + 1;
    if last_start < lo {
        return Some(WindowCount {
            m: lo,
            n,
            count: points.len(),
        });
    }
    let mut best = WindowCount { m: lo, n, count: 0 };
    let mut end = 0;
    for (i, &start) in points.iter().enumerate() {
        if start > last_start {
            break;
        }
        while end < points.len() && points[end] < start + n {
            end += 1;
        }
        if end - i > best.count {
            best = WindowCount {
                m: start,
                n,
                count: end - i,
            };
        }
    }
    let tail = count_sorted(points, last_start, n);
    if tail > best.count {
        best = WindowCount {
            m: last_start,
            n,
            count: tail,
        };
    }
    Some(best)
}

/// Sorted element values in `[−radius, radius]`.
pub fn points_in_radius(family: &SpectrumFamily, radius: i128) -> Result<Vec<i128>> {
    Ok(enumerate_values_in_range(family, -radius, radius + 1)?
        .into_iter()
        .map(|v| v.0)
        .collect())
}

/// Maximizing window of length `n` among `[m, m + n) ⊆ [−radius, radius]`.
pub fn sup_count(family: &SpectrumFamily, n: i128, radius: i128) -> Result<WindowCount> {
    if n < 1 || radius < 0 {
        return Err(Error::Domain(format!(
            "need n ≥ 1 and radius ≥ 0, got n = {n}, radius = {radius}"
        )));
    }
    let points = points_in_radius(family, radius)?;
    sup_count_sorted(&points, n, -radius, radius).ok_or(Error::EmptyRange)
}

/// Outcome of checking `#(Λ ∩ [m, m + p^k)) ≤ q^k` over a search range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountingVerdict {
    pub k: u32,
    pub bound: u128,
    pub worst: WindowCount,
    pub pass: bool,
}

pub fn verify_counting_lemma(
    family: &SpectrumFamily,
    k: u32,
    radius: i128,
) -> Result<CountingVerdict> {
    let points = points_in_radius(family, radius)?;
    verify_counting_lemma_sorted(family.params(), &points, k, radius)
}

/// [`verify_counting_lemma`] over precomputed points in `[−radius, radius]`.
pub fn verify_counting_lemma_sorted(
    params: &MeasureParams,
    points: &[i128],
    k: u32,
    radius: i128,
) -> Result<CountingVerdict> {
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let window = i128::from(params.p())
        .checked_pow(k)
        .ok_or(Error::Overflow("p^k exceeds i128"))?;
    let bound = u128::from(params.q())
        .checked_pow(k)
        .ok_or(Error::Overflow("q^k exceeds u128"))?;
    let worst = sup_count_sorted(points, window, -radius, radius).unwrap_or(WindowCount {
        m: -radius,
        n: window,
        count: 0,
    });
    Ok(CountingVerdict {
        k,
        bound,
        worst,
        pass: worst.count as u128 <= bound,
    })
}

/// Witness radius used when none is given: `p² · candidate_radius`.
pub fn default_witness_radius(params: &MeasureParams, candidate_radius: i128) -> i128 {
    let p = i128::from(params.p());
    candidate_radius.saturating_mul(p * p)
}

/// Integers in `[−candidate_radius, candidate_radius] \ Λ` for which no
/// `λ ∈ Λ ∩ [−witness_radius, witness_radius]` has `x − λ` outside the zero
/// set. Such `x` could still extend the orthogonal set as far as the probe
/// can tell; an empty result means the probe passes.
pub fn maximality_probe(
    family: &SpectrumFamily,
    candidate_radius: i128,
    witness_radius: i128,
) -> Result<Vec<i128>> {
    if witness_radius < candidate_radius {
        return Err(Error::Domain(
            "witness radius must be at least the candidate radius".into(),
        ));
    }
    let points = points_in_radius(family, witness_radius)?;
    Ok(maximality_probe_sorted(
        family.params(),
        &points,
        candidate_radius,
    ))
}

/// [`maximality_probe`] against an explicit sorted witness set.
pub fn maximality_probe_sorted(
    params: &MeasureParams,
    witnesses: &[i128],
    candidate_radius: i128,
) -> Vec<i128> {
    (-candidate_radius..=candidate_radius)
        .filter(|x| witnesses.binary_search(x).is_err())
        .filter(|&x| {
            witnesses
                .iter()
                .all(|&w| zero_set_contains_i128(params, x - w))
        })
        .collect()
}
