//! Measure parameters and the zero structure of the Fourier transform.
//!
//! For `μ = μ_{p,q}` with `q | p` the transform factors as
//! `μ̂(ξ) = ∏_{k≥1} M(ξ / p^{k−1})` with `|M(t)| = |sin πt| / (q |sin(πt/q)|)`,
//! so the integer zeros of `μ̂` are exactly `⋃_{k≥0} p^k (ℤ \ qℤ)`. Two integer
//! frequencies `λ ≠ λ'` give orthogonal exponentials iff `λ − λ'` lies in that
//! set.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Largest supported scale factor `p`. Keeps every pruning bound inside `i128`.
pub const MAX_SCALE: u32 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureParams {
    p: u32,
    q: u32,
    s: f64,
    density_bound: f64,
    /// `(a, b)` with `q = c^a`, `p = c^b` for a common base `c`, when one exists.
    rational_exponent: Option<(u32, u32)>,
}

impl MeasureParams {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p < 2 || q < 2 {
            return Err(Error::Parameter(format!(
                "p = {p}, q = {q}: both must be at least 2"
            )));
        }
        if p > MAX_SCALE {
            return Err(Error::Parameter(format!(
                "p = {p} exceeds the supported maximum {MAX_SCALE}"
            )));
        }
        if !p.is_multiple_of(q) {
            return Err(Error::Parameter(format!(
                "q = {q} does not divide p = {p}; the measure is not spectral"
            )));
        }
        let rational_exponent = common_base_exponents(p, q);
        let s = match rational_exponent {
            Some((a, b)) => f64::from(a) / f64::from(b),
            None => libm::log(f64::from(q)) / libm::log(f64::from(p)),
        };
        let density_bound = libm::pow(2.0 * f64::from(p - 1) / f64::from(q - 1), s);
        Ok(Self {
            p,
            q,
            s,
            density_bound,
            rational_exponent,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Contraction ratio of the digit spacing, `r = p/q`.
    pub fn digit_spacing(&self) -> u32 {
        self.p / self.q
    }

    /// `s = ln q / ln p`, the Hausdorff dimension of the support.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// `(2(p−1)/(q−1))^s`, the maximal upper `s`-Beurling density of a
    /// regular maximal orthogonal set.
    pub fn density_bound(&self) -> f64 {
        self.density_bound
    }

    /// `Some((a, b))` with `s = a/b` when `p` and `q` are powers of a common base.
    pub fn rational_exponent(&self) -> Option<(u32, u32)> {
        self.rational_exponent
    }
}

fn common_base_exponents(p: u32, q: u32) -> Option<(u32, u32)> {
    // Try the largest exponent first so the base is as small as possible.
    let max_b = 32 - p.leading_zeros();
    for b in (1..=max_b).rev() {
        let Some(c) = exact_root(p, b) else { continue };
        if c < 2 {
            continue;
        }
        let mut a = 0;
        let mut acc: u64 = 1;
        while acc < u64::from(q) {
            acc *= u64::from(c);
            a += 1;
        }
        if acc == u64::from(q) {
            let g = a.gcd(&b);
            return Some((a / g, b / g));
        }
    }
    None
}

fn exact_root(value: u32, exponent: u32) -> Option<u32> {
    let guess = libm::round(libm::pow(f64::from(value), 1.0 / f64::from(exponent))) as u64;
    for c in guess.saturating_sub(1)..=guess + 1 {
        if c.checked_pow(exponent) == Some(u64::from(value)) {
            return Some(c as u32);
        }
    }
    None
}

/// Exact membership of `d` in `⋃_{k≥0} p^k (ℤ \ qℤ)`.
pub fn zero_set_contains(params: &MeasureParams, d: &BigInt) -> bool {
    if d.is_zero() {
        return false;
    }
    let p = BigInt::from(params.p);
    let q = BigInt::from(params.q);
    let mut x = d.abs();
    loop {
        if !x.is_multiple_of(&q) {
            return true;
        }
        let (quot, rem) = x.div_rem(&p);
        if !rem.is_zero() {
            return false;
        }
        x = quot;
    }
}

/// [`zero_set_contains`] on machine integers.
pub fn zero_set_contains_i128(params: &MeasureParams, d: i128) -> bool {
    if d == 0 {
        return false;
    }
    let p = u128::from(params.p);
    let q = u128::from(params.q);
    let mut x = d.unsigned_abs();
    loop {
        if !x.is_multiple_of(q) {
            return true;
        }
        if !x.is_multiple_of(p) {
            return false;
        }
        x /= p;
    }
}

/// `sin(πx)`, exact zero at integers.
fn sin_pi(x: f64) -> f64 {
    let r = x % 2.0;
    if r == 0.0 || r == 1.0 || r == -1.0 {
        return 0.0;
    }
    libm::sin(PI * r)
}

/// `|M(t)| = |sin πt| / (q |sin(πt/q)|)`, equal to 1 on `qℤ`.
fn mask_magnitude(q: f64, t: f64) -> f64 {
    if t % q == 0.0 {
        return 1.0;
    }
    libm::fabs(sin_pi(t) / (q * sin_pi(t / q)))
}

/// Truncated product `∏_{k=1}^{depth} |M(ξ/p^{k−1})|`.
pub fn eval_mu_hat_magnitude(params: &MeasureParams, xi: f64, depth: u32) -> Result<f64> {
    if depth < 1 {
        return Err(Error::Domain(format!(
            "depth must be at least 1, got {depth}"
        )));
    }
    let p = f64::from(params.p);
    let q = f64::from(params.q);
    let mut scale = 1.0;
    let mut product = 1.0;
    for _ in 0..depth {
        product *= mask_magnitude(q, xi / scale);
        if product == 0.0 {
            break;
        }
        scale *= p;
    }
    Ok(product)
}

/// Every unordered pair of `elems` whose difference misses the zero set.
/// An empty result certifies mutual orthogonality of the finite set.
pub fn check_orthogonal_pairwise(
    params: &MeasureParams,
    elems: &[BigInt],
) -> Result<Vec<(BigInt, BigInt)>> {
    let mut sorted: Vec<&BigInt> = elems.iter().collect();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Duplicate(format!("{}", w[0])));
    }
    let mut violations = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i + 1..] {
            if !zero_set_contains(params, &(a - b)) {
                violations.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(violations)
}
