//! Orthogonal sets, spectra and Beurling densities for the self-similar
//! measures `μ_{p,q}` generated by the maps `x ↦ (x + d)/p` with the
//! consecutive digit set `d ∈ (p/q)·{0, …, q−1}`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; IO, configuration and parallel drivers live in
//! the `spectra-lab` companion crate.
//!
//! * [`measure`]: parameters, the exact integer zero set of `μ̂`, a numeric
//!   evaluator of `|μ̂|` and pairwise orthogonality checks.
//! * [`coding`]: words over `{0, …, q−1}`, regular mappings, the built-in
//!   spectrum families and pruned range enumeration.
//! * [`counting`]: window counts, sliding-window suprema, the `q^k` counting
//!   bound and a finite maximality probe.
//! * [`density`]: upper `r`-Beurling density reports, the closed-form bound,
//!   Beurling dimension fits and the lacunarity check.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod coding;
pub mod counting;
pub mod density;
mod error;
pub mod expansion;
pub mod measure;

pub use coding::{SpectrumElement, SpectrumFamily, Word};
pub use error::{Error, RegularityCondition, Result};
pub use expansion::DigitExpansion;
pub use measure::MeasureParams;
