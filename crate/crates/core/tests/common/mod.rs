#![allow(dead_code)]

use spectra_core::coding::{HeadTable, SignPattern, ThpChoices};
use spectra_core::{MeasureParams, SpectrumFamily};

pub const PAIRS: [(u32, u32); 3] = [(4, 2), (6, 3), (9, 3)];

pub fn params(p: u32, q: u32) -> MeasureParams {
    MeasureParams::new(p, q).unwrap()
}

/// A nonidentity representative table for each pair in [`PAIRS`].
pub fn shifted_table(p: u32, q: u32) -> HeadTable {
    match (p, q) {
        (4, 2) => HeadTable::new(vec![vec![0, -1], vec![0, 1]]),
        (6, 3) => HeadTable::new(vec![vec![0, 4, -1]]),
        (9, 3) => HeadTable::new(vec![vec![0, 4, -1], vec![0, 7, 2]]),
        _ => HeadTable::identity(q),
    }
}

/// Canonical, two representative tables and three thp choices.
pub fn regular_families(p: u32, q: u32) -> Vec<SpectrumFamily> {
    let m = params(p, q);
    let mut out = vec![
        SpectrumFamily::canonical(m),
        SpectrumFamily::representative_default(m).unwrap(),
        SpectrumFamily::representative(m, shifted_table(p, q)).unwrap(),
    ];
    for hex in ["", "a5", "ffff"] {
        out.push(SpectrumFamily::thp(m, ThpChoices::from_hex(hex).unwrap()).unwrap());
    }
    out
}

/// Regular families plus two sign words.
pub fn all_families(p: u32, q: u32) -> Vec<SpectrumFamily> {
    let m = params(p, q);
    let mut out = regular_families(p, q);
    out.push(SpectrumFamily::sign_word(
        m,
        SignPattern::parse("", "+-").unwrap(),
    ));
    out.push(SpectrumFamily::sign_word(
        m,
        SignPattern::parse("+", "-").unwrap(),
    ));
    out
}
