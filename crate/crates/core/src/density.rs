//! Upper `r`-Beurling densities, the closed-form bound at `r = s`, Beurling
//! dimension fits and the lacunarity check for tail-bump spectra.
//!
//! Densities use the integer-window form
//! `D_r^+(Λ) = 2^r · limsup_n sup_m #(Λ ∩ [m, m+n)) / n^r`. Everything here
//! is a finite-schedule estimate of that limsup; nothing claims the limit.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, ToPrimitive, Zero};

use crate::coding::{element_at, FamilyKind, SpectrumFamily};
use crate::counting::{count_sorted, points_in_radius, sup_count_sorted};
use crate::error::{Error, Result};
use crate::measure::MeasureParams;

/// Tolerance for floating comparisons against the bound when `s` is irrational.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// `n_k = (q−1)(p^k−1)/(p−1)` for `k = 1..=k_max`.
pub fn nk_schedule(params: &MeasureParams, k_max: u32) -> Result<Vec<i128>> {
    if k_max < 1 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let p = i128::from(params.p());
    let q = i128::from(params.q());
    let mut out = Vec::with_capacity(k_max as usize);
    // (p^k − 1)/(p − 1) = 1 + p + … + p^{k−1}
    let mut repunit: i128 = 0;
    let mut weight: i128 = 1;
    for _ in 0..k_max {
        repunit = repunit
            .checked_add(weight)
            .ok_or(Error::Overflow("n_k exceeds i128"))?;
        weight = weight.saturating_mul(p);
        out.push(
            repunit
                .checked_mul(q - 1)
                .ok_or(Error::Overflow("n_k exceeds i128"))?,
        );
    }
    Ok(out)
}

/// `2^r · count / n^r`.
pub fn density_ratio(r: f64, count: usize, n: i128) -> f64 {
    libm::pow(2.0, r) * count as f64 / libm::pow(n as f64, r)
}

/// Exact test of `2^s · count / n^s > (2(p−1)/(q−1))^s`, available when `s` is
/// rational (`p`, `q` powers of a common base).
pub fn exceeds_bound_exact(params: &MeasureParams, count: usize, n: i128) -> Option<bool> {
    let (a, b) = params.rational_exponent()?;
    let count = BigInt::from(count);
    let n = BigInt::from(n);
    let pm1 = BigInt::from(params.p() - 1);
    let qm1 = BigInt::from(params.q() - 1);
    // Raise both sides to the power b = a/s.
    let lhs = Pow::pow(&count, b) * Pow::pow(&qm1, a);
    let rhs = Pow::pow(&pm1, a) * Pow::pow(&n, a);
    Some(lhs > rhs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityRow {
    pub n: i128,
    /// Left endpoint of the maximizing window.
    pub m: i128,
    pub count: usize,
    pub ratio: f64,
    /// Exact `ratio > bound`, when `r = s` and `s` is rational.
    pub exact_exceeds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub r: f64,
    pub radius: i128,
    pub rows: Vec<DensityRow>,
    /// Maximum ratio over the schedule; a lower estimate of the limsup.
    pub estimate: f64,
    /// `(2(p−1)/(q−1))^s` when `r = s`.
    pub bound: Option<f64>,
    /// `estimate ≤ bound`, decided exactly when possible and otherwise
    /// within [`FLOAT_TOLERANCE`]. `None` when `r ≠ s`.
    pub verdict: Option<bool>,
}

impl DensityReport {
    /// Ratio at the longest window, the tail end of the trend.
    pub fn last_ratio(&self) -> Option<f64> {
        self.rows.last().map(|r| r.ratio)
    }
}

fn is_s(params: &MeasureParams, r: f64) -> bool {
    (r - params.s()).abs() < 1e-12
}

fn validate_schedule(schedule: &[i128]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::Domain("window schedule is empty".into()));
    }
    if schedule[0] < 1 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "window schedule must be positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

pub fn upper_density(
    family: &SpectrumFamily,
    r: f64,
    schedule: &[i128],
    radius: i128,
) -> Result<DensityReport> {
    validate_schedule(schedule)?;
    let points = points_in_radius(family, radius)?;
    upper_density_sorted(family.params(), &points, r, schedule, radius)
}

/// [`upper_density`] over precomputed sorted points in `[−radius, radius]`.
pub fn upper_density_sorted(
    params: &MeasureParams,
    points: &[i128],
    r: f64,
    schedule: &[i128],
    radius: i128,
) -> Result<DensityReport> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::Domain(format!(
            "exponent r must be positive, got {r}"
        )));
    }
    validate_schedule(schedule)?;
    let at_s = is_s(params, r);
    let mut rows = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let w =
            sup_count_sorted(points, n, -radius, radius).unwrap_or(crate::counting::WindowCount {
                m: -radius,
                n,
                count: 0,
            });
        rows.push(DensityRow {
            n,
            m: w.m,
            count: w.count,
            ratio: density_ratio(r, w.count, n),
            exact_exceeds: if at_s {
                exceeds_bound_exact(params, w.count, n)
            } else {
                None
            },
        });
    }
    let estimate = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let bound = at_s.then(|| params.density_bound());
    let verdict = bound.map(|b| {
        rows.iter().all(|row| match row.exact_exceeds {
            Some(exceeds) => !exceeds,
            None => row.ratio <= b + FLOAT_TOLERANCE,
        })
    });
    Ok(DensityReport {
        r,
        radius,
        rows,
        estimate,
        bound,
        verdict,
    })
}

/// Least-squares slope of `ln sup_count(n)` against `ln n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual of the fit in log space.
    pub max_residual: f64,
    /// Slope between the last two schedule points, a cross-check on the trend.
    pub endpoint_slope: f64,
    /// All counts were equal; the slope is reported as 0.
    pub constant_counts: bool,
    pub samples: Vec<(i128, usize)>,
}

pub fn beurling_dimension_estimate(
    family: &SpectrumFamily,
    schedule: &[i128],
    radius: i128,
) -> Result<DimensionFit> {
    let points = points_in_radius(family, radius)?;
    dimension_fit_sorted(&points, schedule, radius)
}

/// [`beurling_dimension_estimate`] over precomputed sorted points.
pub fn dimension_fit_sorted(
    points: &[i128],
    schedule: &[i128],
    radius: i128,
) -> Result<DimensionFit> {
    validate_schedule(schedule)?;
    if schedule.len() < 2 || (schedule[schedule.len() - 1] as f64) < 100.0 * schedule[0] as f64 {
        return Err(Error::DegenerateFit(
            "schedule must span at least two decades".into(),
        ));
    }
    if points.is_empty() {
        return Err(Error::EmptyRange);
    }
    let samples: Vec<(i128, usize)> = schedule
        .iter()
        .map(|&n| {
            (
                n,
                sup_count_sorted(points, n, -radius, radius).map_or(0, |w| w.count),
            )
        })
        .collect();
    let xs: Vec<f64> = samples.iter().map(|s| libm::log(s.0 as f64)).collect();
    let ys: Vec<f64> = samples.iter().map(|s| libm::log(s.1 as f64)).collect();
    let len = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / len;
    let y_mean = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let constant_counts = samples.iter().all(|s| s.1 == samples[0].1);
    let slope = if constant_counts { 0.0 } else { sxy / sxx };
    let intercept = y_mean - slope * x_mean;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    let last = xs.len() - 1;
    let endpoint_slope = (ys[last] - ys[last - 1]) / (xs[last] - xs[last - 1]);
    Ok(DimensionFit {
        slope,
        intercept,
        max_residual,
        endpoint_slope,
        constant_counts,
        samples,
    })
}

/// One step of the `m = 0`, `n = n_k + 1` sequence for the canonical spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceStep {
    pub k: u32,
    pub window: i128,
    pub count: usize,
    pub ratio: f64,
    /// `bound · c / p^k` with `c = (p−q)/(q−1)`; the gap to the bound never exceeds it.
    pub envelope: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundVerdict {
    pub pass: bool,
    pub bound: f64,
    pub tolerance: f64,
    pub report: DensityReport,
    /// The row with the largest ratio.
    pub worst: DensityRow,
    /// Windows where the exact comparison found `ratio > bound`.
    pub exact_exceedances: Vec<i128>,
    /// Canonical family only: the convergence sequence and whether it rises
    /// monotonically to within its envelope of the bound.
    pub convergence: Option<(Vec<ConvergenceStep>, bool)>,
}

/// Mesh of window lengths: every `n ∈ [2, p³]` plus `n_k` and `n_k + 1` for `k ≤ k_max`.
pub fn bound_mesh(params: &MeasureParams, k_max: u32) -> Result<Vec<i128>> {
    let p = i128::from(params.p());
    let mut mesh: BTreeSet<i128> = (2..=p * p * p).collect();
    for nk in nk_schedule(params, k_max)? {
        mesh.insert(nk);
        mesh.insert(nk + 1);
    }
    Ok(mesh.into_iter().collect())
}

/// Checks every mesh ratio at `r = s` against `(2(p−1)/(q−1))^s + tolerance`
/// over the radius `p^{k_max+1}`.
pub fn verify_density_bound(
    family: &SpectrumFamily,
    k_max: u32,
    tolerance: f64,
) -> Result<BoundVerdict> {
    let radius = i128::from(family.params().p())
        .checked_pow(k_max + 1)
        .ok_or(Error::Overflow("p^(k_max+1) exceeds i128"))?;
    verify_density_bound_within(family, k_max, tolerance, radius)
}

/// [`verify_density_bound`] over an explicit search radius. The canonical
/// convergence check runs only when the radius covers `[0, n_{k_max}]`.
pub fn verify_density_bound_within(
    family: &SpectrumFamily,
    k_max: u32,
    tolerance: f64,
    radius: i128,
) -> Result<BoundVerdict> {
    if k_max < 2 {
        return Err(Error::Domain("k_max must be at least 2".into()));
    }
    if radius < 0 {
        return Err(Error::Domain(format!(
            "radius must be nonnegative, got {radius}"
        )));
    }
    let params = *family.params();
    let points = points_in_radius(family, radius)?;
    let mesh = bound_mesh(&params, k_max)?;
    let report = upper_density_sorted(&params, &points, params.s(), &mesh, radius)?;
    let bound = params.density_bound();
    let worst = report
        .rows
        .iter()
        .cloned()
        .reduce(|a, b| if b.ratio > a.ratio { b } else { a })
        .expect("mesh is nonempty");
    let exact_exceedances: Vec<i128> = report
        .rows
        .iter()
        .filter(|r| r.exact_exceeds == Some(true))
        .map(|r| r.n)
        .collect();
    let mut pass = worst.ratio <= bound + tolerance;

    let covered = nk_schedule(&params, k_max)?
        .last()
        .is_some_and(|&nk| nk <= radius);
    let convergence = if matches!(family.kind(), FamilyKind::Canonical) && covered {
        let steps = canonical_convergence(&params, &points, k_max)?;
        let rising = steps
            .windows(2)
            .all(|w| w[1].ratio >= w[0].ratio - tolerance);
        let enveloped = steps
            .iter()
            .all(|st| st.ratio <= bound + tolerance && bound - st.ratio <= st.envelope + tolerance);
        pass &= rising && enveloped;
        Some((steps, rising && enveloped))
    } else {
        None
    };
    Ok(BoundVerdict {
        pass,
        bound,
        tolerance,
        report,
        worst,
        exact_exceedances,
        convergence,
    })
}

fn canonical_convergence(
    params: &MeasureParams,
    points: &[i128],
    k_max: u32,
) -> Result<Vec<ConvergenceStep>> {
    let s = params.s();
    let bound = params.density_bound();
    let (p, q) = (f64::from(params.p()), f64::from(params.q()));
    let c = (p - q) / (q - 1.0);
    let schedule = nk_schedule(params, k_max)?;
    Ok(schedule
        .iter()
        .zip(1..)
        .map(|(&nk, k)| {
            let window = nk + 1;
            let count = count_sorted(points, 0, window);
            ConvergenceStep {
                k,
                window,
                count,
                ratio: density_ratio(s, count, window),
                envelope: bound * c / libm::pow(p, f64::from(k)),
            }
        })
        .collect())
}

/// Result of checking `λ_{n+2} / λ_n ≥ b = qp/(q+1)` over even indices.
#[derive(Clone, Debug, PartialEq)]
pub struct LacunarityVerdict {
    /// `b` as the fraction `(qp, q+1)`.
    pub b: (u64, u64),
    pub pass: bool,
    /// Smallest ratio seen and the lower index `n` of its pair.
    pub min_ratio: f64,
    pub min_at: u64,
    pub pairs: usize,
    /// Lower indices of pairs failing the inequality.
    pub failures: Vec<u64>,
}

/// Exact check over `λ_2, λ_4, …, λ_{2·even_count}` by big-integer
/// cross-multiplication.
pub fn verify_lacunarity(family: &SpectrumFamily, even_count: u64) -> Result<LacunarityVerdict> {
    if !matches!(family.kind(), FamilyKind::Thp(_)) {
        return Err(Error::Domain(format!(
            "lacunarity applies to the thp family, not {}",
            family.name()
        )));
    }
    if even_count < 2 {
        return Err(Error::Domain("need at least two even indices".into()));
    }
    let p = u64::from(family.params().p());
    let q = u64::from(family.params().q());
    let (b_num, b_den) = (q * p, q + 1);
    let values: Vec<(u64, BigInt)> = (1..=even_count)
        .map(|j| element_at(family, 2 * j).map(|e| (2 * j, e.lambda())))
        .collect::<Result<_>>()?;

    let mut failures = Vec::new();
    // Current minimum as the fraction num/den.
    let mut min: Option<(&BigInt, &BigInt, u64)> = None;
    for pair in values.windows(2) {
        let (n, lower) = (&pair[0].0, &pair[0].1);
        let upper = &pair[1].1;
        if upper * b_den < lower * b_num {
            failures.push(*n);
        }
        let smaller = match min {
            None => true,
            Some((num, den, _)) => upper * den < num * lower,
        };
        if smaller {
            min = Some((upper, lower, *n));
        }
    }
    let (num, den, min_at) = min.expect("at least one pair");
    Ok(LacunarityVerdict {
        b: (b_num, b_den),
        pass: failures.is_empty(),
        min_ratio: libm::exp(big_ln(num) - big_ln(den)),
        min_at,
        pairs: values.len() - 1,
        failures,
    })
}

/// `ln |x|` for integers of any size.
fn big_ln(x: &BigInt) -> f64 {
    debug_assert!(!x.is_zero());
    let x = x.abs();
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    libm::log(top.to_f64().unwrap_or(f64::INFINITY)) + shift as f64 * core::f64::consts::LN_2
}
