//! Words over `{0, …, q−1}`, regular mappings and the spectra they generate.
//!
//! A canonical word `I = i_1 … i_N` (nonzero last digit, or the zero word)
//! indexes `n = i_1 + i_2 q + … + i_N q^{N−1}` and maps to
//!
//! ```text
//! λ_n = τ(I|_1) + τ(I|_2) p + … + τ(I|_N) p^{N−1} + Σ_{l≥1} τ(I 0^l) p^{N+l−1}
//! ```
//!
//! Elements are kept as sparse base-`p` expansions; the integer is built on
//! demand with [`SpectrumElement::lambda`].

mod enumerate;
mod family;
mod word;

use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::expansion::DigitExpansion;

pub use enumerate::{
    enumerate_by_sweep, enumerate_in_range, enumerate_values_in_range, RANGE_LIMIT,
};
pub use family::{
    FamilyKind, HeadTable, RegularMapping, SignPattern, SpectrumFamily, TableMapping, TailBump,
    ThpChoices,
};
pub use word::{index_to_word, word_to_index, Word};

/// `λ_n` together with the word and index that generate it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumElement {
    pub index: u64,
    pub word: Word,
    pub expansion: DigitExpansion,
}

impl SpectrumElement {
    pub fn lambda(&self) -> BigInt {
        self.expansion.to_bigint()
    }

    /// `λ_n` when it fits in an `i128`.
    pub fn value_i128(&self) -> Option<i128> {
        self.expansion.to_i128()
    }
}

/// Evaluates `τ*` on a canonical word.
pub fn tau_star(family: &SpectrumFamily, word: &Word) -> Result<SpectrumElement> {
    let index = word_to_index(word, family.params().q())?;
    tau_star_indexed(family, word.clone(), index)
}

fn tau_star_indexed(family: &SpectrumFamily, word: Word, index: u64) -> Result<SpectrumElement> {
    let digits = word.digits();
    let mut terms = Vec::with_capacity(digits.len() + 1);
    let mut all_zero = true;
    for k in 1..=digits.len() {
        all_zero &= digits[k - 1] == 0;
        let value = family.checked_head(&digits[..k], all_zero)?;
        if value != 0 {
            terms.push(((k - 1) as u64, value));
        }
    }
    for bump in family.tail(index, digits.len())? {
        let exponent = (digits.len() as u64 - 1)
            .checked_add(bump.offset)
            .ok_or(Error::Overflow("tail exponent exceeds u64"))?;
        terms.push((exponent, bump.value));
    }
    Ok(SpectrumElement {
        index,
        word,
        expansion: DigitExpansion::new(family.params().p(), terms),
    })
}

/// `λ_0, …, λ_{limit−1}` in index order.
pub fn generate_elements(family: &SpectrumFamily, limit: u64) -> Result<Vec<SpectrumElement>> {
    if limit < 1 {
        return Err(Error::Domain("index limit must be at least 1".into()));
    }
    let q = family.params().q();
    (0..limit)
        .map(|n| tau_star_indexed(family, index_to_word(q, n), n))
        .collect()
}

/// Element for a single index.
pub fn element_at(family: &SpectrumFamily, index: u64) -> Result<SpectrumElement> {
    tau_star_indexed(family, index_to_word(family.params().q(), index), index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureParams;
    use alloc::vec;

    fn params(p: u32, q: u32) -> MeasureParams {
        MeasureParams::new(p, q).unwrap()
    }

    fn values(elems: &[SpectrumElement]) -> Vec<i128> {
        elems.iter().map(|e| e.value_i128().unwrap()).collect()
    }

    #[test]
    fn tau_star_examples() {
        let canon = SpectrumFamily::canonical(params(4, 2));
        let w = Word::new(vec![1, 0, 1], 2).unwrap();
        assert_eq!(tau_star(&canon, &w).unwrap().lambda(), BigInt::from(17));
        assert_eq!(
            tau_star(&canon, &Word::zero()).unwrap().lambda(),
            BigInt::from(0)
        );

        let thp = SpectrumFamily::thp(params(4, 2), ThpChoices::all_squares()).unwrap();
        let w = Word::new(vec![0, 1], 2).unwrap();
        let e = tau_star(&thp, &w).unwrap();
        assert_eq!(e.index, 2);
        assert_eq!(e.lambda(), BigInt::from(2052));
        assert_eq!(
            tau_star(&thp, &Word::zero()).unwrap().lambda(),
            BigInt::from(0)
        );

        let canon63 = SpectrumFamily::canonical(params(6, 3));
        let w = Word::new(vec![1, 2], 3).unwrap();
        assert_eq!(tau_star(&canon63, &w).unwrap().lambda(), BigInt::from(13));
    }

    #[test]
    fn tau_star_rejects_trailing_zero() {
        let canon = SpectrumFamily::canonical(params(4, 2));
        let w = Word::new(vec![1, 0], 2).unwrap();
        assert!(matches!(tau_star(&canon, &w), Err(Error::Form(_))));
    }

    #[test]
    fn generate_examples() {
        let canon = SpectrumFamily::canonical(params(4, 2));
        assert_eq!(values(&generate_elements(&canon, 4).unwrap()), [0, 1, 4, 5]);
        assert_eq!(values(&generate_elements(&canon, 1).unwrap()), [0]);
        let canon63 = SpectrumFamily::canonical(params(6, 3));
        assert_eq!(
            values(&generate_elements(&canon63, 9).unwrap()),
            [0, 1, 2, 6, 7, 8, 12, 13, 14]
        );
        assert!(generate_elements(&canon, 0).is_err());
    }

    #[test]
    fn sign_word_values() {
        let w = SignPattern::parse("", "+-").unwrap();
        let fam = SpectrumFamily::sign_word(params(6, 3), w);
        // a_1 − 6 a_2 + 36 a_3
        assert_eq!(
            values(&generate_elements(&fam, 9).unwrap()),
            [0, 1, 2, -6, -5, -4, -12, -11, -10]
        );
        assert_eq!(element_at(&fam, 9).unwrap().value_i128(), Some(36));
    }

    #[test]
    fn representative_values() {
        let table = HeadTable::new(vec![vec![0, 4, -1], vec![0, 1, -1]]);
        let fam = SpectrumFamily::representative(params(6, 3), table).unwrap();
        // Row 1 applies at the first position only; row 2 repeats after it.
        assert_eq!(
            values(&generate_elements(&fam, 6).unwrap()),
            [0, 4, -1, 6, 10, 5]
        );
        // n = 17 is (2,2,1).
        assert_eq!(
            element_at(&fam, 17).unwrap().value_i128(),
            Some(-1 - 6 + 36)
        );
    }

    #[test]
    fn thp_tail_bumps() {
        let m = params(6, 3);
        let fam = SpectrumFamily::thp(m, ThpChoices::from_hex("8").unwrap()).unwrap();
        let e2 = element_at(&fam, 2).unwrap();
        // n = 2 is the single-digit word (2), m_2 = 5 with the bit set.
        assert_eq!(e2.expansion.terms(), &[(0, 2), (5, 3)]);
        let e4 = element_at(&fam, 4).unwrap();
        assert_eq!(e4.expansion.terms(), &[(0, 1), (1, 1), (17, 3)]);
        let odd = element_at(&fam, 5).unwrap();
        assert_eq!(odd.value_i128(), Some(2 + 6));
    }

    #[test]
    fn thp_interior_runs_carry_the_bump() {
        let fam = SpectrumFamily::thp(params(4, 2), ThpChoices::all_squares()).unwrap();
        // n = 66 is (0,1,0,0,0,0,1): the prefix (0,1)·0^4 is the bump run of n = 2.
        let e = element_at(&fam, 66).unwrap();
        assert_eq!(
            e.expansion.terms(),
            &[(1, 1), (5, 2), (6, 1), (6 + 66 * 66, 2)]
        );
        let pair = [element_at(&fam, 2).unwrap().lambda(), e.lambda()];
        assert!(
            crate::measure::check_orthogonal_pairwise(fam.params(), &pair)
                .unwrap()
                .is_empty()
        );

        let mut tails = alloc::collections::BTreeMap::new();
        tails.insert(
            1,
            vec![TailBump {
                offset: 1,
                value: 2,
            }],
        );
        let table = TableMapping {
            head: HeadTable::identity(2),
            tails,
            tail_bound: Some(1),
        };
        let custom = SpectrumFamily::custom_table(params(4, 2), table).unwrap();
        assert_eq!(
            values(&generate_elements(&custom, 6).unwrap()),
            [0, 9, 4, 5, 16, 25]
        );
    }

    #[test]
    fn huge_tails_stay_symbolic() {
        let fam = SpectrumFamily::thp(params(4, 2), ThpChoices::all_squares()).unwrap();
        let e = element_at(&fam, 10_000).unwrap();
        assert_eq!(e.expansion.top_exponent(), Some(100_000_000 + 13));
        assert_eq!(e.value_i128(), None);
    }
}
