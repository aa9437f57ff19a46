use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, RegularityCondition, Result};
use crate::measure::MeasureParams;

/// A nonzero tail value `τ(I 0^offset) = value`, placed at weight
/// `p^{N + offset − 1}` for a word `I` of length `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TailBump {
    pub offset: u64,
    pub value: i64,
}

/// A regular mapping `τ` restricted to the data the element formula consumes:
/// the head values on prefixes of a canonical word and its finitely many
/// nonzero tail values.
pub trait RegularMapping: fmt::Debug + Send + Sync {
    /// `τ(i_1 … i_k)` for the nonempty prefix `prefix`.
    fn head(&self, prefix: &[u32]) -> i64;

    /// Nonzero tail values of the canonical word with index `index` and length `len`.
    fn tail(&self, index: u64, len: usize) -> Vec<TailBump>;

    /// `max_n ℓ_n`, when known.
    fn tail_bound(&self) -> Option<usize> {
        None
    }
}

/// Head values by position and digit. Row `k − 1` gives `τ` at position `k`;
/// the last row repeats. On an all-zero prefix the value is always 0.
///
/// Every word ending in 0 has the form `I 0^l` with `I` canonical, so a
/// mapping without tails sends it to 0: the digit-0 entry of each row must be 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadTable {
    rows: Vec<Vec<i64>>,
}

impl HeadTable {
    pub fn new(rows: Vec<Vec<i64>>) -> Self {
        Self { rows }
    }

    /// The digits themselves: `τ(I) = i_N`.
    pub fn identity(q: u32) -> Self {
        Self {
            rows: vec![(0..i64::from(q)).collect()],
        }
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn value(&self, position: usize, digit: u32, all_zero: bool) -> i64 {
        if all_zero {
            return 0;
        }
        let row = &self.rows[position.min(self.rows.len()) - 1];
        row[digit as usize]
    }

    fn validate(&self, params: &MeasureParams) -> Result<()> {
        let q = params.q() as usize;
        if self.rows.is_empty() {
            return Err(Error::Parameter("head table has no rows".into()));
        }
        for (k, row) in self.rows.iter().enumerate() {
            if row.len() != q {
                return Err(Error::Parameter(format!(
                    "head table row {} has {} entries, expected q = {q}",
                    k + 1,
                    row.len()
                )));
            }
            for (digit, &value) in row.iter().enumerate() {
                check_head_value(params, k as u64 + 1, digit as u32, value, false)?;
            }
            if row[0] != 0 {
                return Err(Error::Condition {
                    condition: RegularityCondition::FiniteTail,
                    detail: format!(
                        "head table row {} sends digit 0 to {}; words ending in 0 are tails and must map to 0",
                        k + 1,
                        row[0]
                    ),
                });
            }
        }
        Ok(())
    }
}

/// A table-driven regular mapping: head rows plus explicit tail bumps per index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMapping {
    pub head: HeadTable,
    pub tails: BTreeMap<u64, Vec<TailBump>>,
    pub tail_bound: Option<usize>,
}

impl TableMapping {
    pub fn validate(&self, params: &MeasureParams) -> Result<()> {
        self.head.validate(params)?;
        for (&index, bumps) in &self.tails {
            check_tail_values(params, index, bumps, self.tail_bound)?;
        }
        Ok(())
    }
}

impl RegularMapping for TableMapping {
    /// A prefix `J 0^t` reads the tail table of `J`, so the head value of
    /// an interior run agrees with the tail value of the shorter word.
    fn head(&self, prefix: &[u32]) -> i64 {
        let q = self.head.rows()[0].len() as u32;
        match tail_position(prefix, q) {
            Some((index, offset)) => self
                .tails
                .get(&index)
                .and_then(|bumps| bumps.iter().find(|b| b.offset == offset))
                .map_or(0, |b| b.value),
            None => {
                let all_zero = prefix.iter().all(|&d| d == 0);
                self.head
                    .value(prefix.len(), prefix[prefix.len() - 1], all_zero)
            }
        }
    }

    fn tail(&self, index: u64, _len: usize) -> Vec<TailBump> {
        self.tails.get(&index).cloned().unwrap_or_default()
    }

    fn tail_bound(&self) -> Option<usize> {
        self.tail_bound
    }
}

/// An eventually periodic sign sequence `w_1 w_2 … ∈ {−1, 1}^∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignPattern {
    prefix: Vec<i8>,
    cycle: Vec<i8>,
}

impl SignPattern {
    pub fn new(prefix: Vec<i8>, cycle: Vec<i8>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Parameter(
                "sign pattern needs a nonempty repeating part".into(),
            ));
        }
        if prefix.iter().chain(&cycle).any(|&w| w != 1 && w != -1) {
            return Err(Error::Parameter("signs must be +1 or -1".into()));
        }
        Ok(Self { prefix, cycle })
    }

    /// Parses strings of `+`/`-` such as `"-+"` (prefix) and `"+-"` (cycle).
    pub fn parse(prefix: &str, cycle: &str) -> Result<Self> {
        fn signs(s: &str) -> Result<Vec<i8>> {
            s.chars()
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    other => Err(Error::Parameter(format!(
                        "invalid sign character {other:?}"
                    ))),
                })
                .collect()
        }
        Self::new(signs(prefix)?, signs(cycle)?)
    }

    /// `w_position` for 1-based `position`.
    pub fn sign(&self, position: usize) -> i8 {
        let i = position - 1;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn prefix(&self) -> &[i8] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[i8] {
        &self.cycle
    }

    fn has(&self, sign: i8) -> bool {
        self.prefix.iter().chain(&self.cycle).any(|&w| w == sign)
    }

    pub fn to_strings(&self) -> (String, String) {
        let render = |v: &[i8]| v.iter().map(|&w| if w > 0 { '+' } else { '-' }).collect();
        (render(&self.prefix), render(&self.cycle))
    }
}

/// Per even index `n ≥ 2`, whether `m_n = n² + 1` (bit set) or `n²` (bit clear).
/// Bit `j` governs `n = 2(j + 1)`; missing bits are clear.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThpChoices {
    bits: Vec<bool>,
}

impl ThpChoices {
    pub fn all_squares() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Decodes hex digits most significant bit first: the first hex digit
    /// holds bits 0..4, its high bit being bit 0.
    pub fn from_hex(hex: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for c in hex.chars() {
            let nibble = c.to_digit(16).ok_or_else(|| {
                Error::Parameter(format!("invalid hex digit {c:?} in choice bits"))
            })?;
            for shift in (0..4).rev() {
                bits.push(nibble >> shift & 1 == 1);
            }
        }
        Ok(Self { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `m_n` for an even `n ≥ 2`.
    pub fn m(&self, n: u64) -> Result<u64> {
        let square = n
            .checked_mul(n)
            .ok_or(Error::Overflow("m_n = n^2 exceeds u64"))?;
        let bump = usize::try_from(n / 2 - 1)
            .ok()
            .and_then(|j| self.bits.get(j))
            .copied()
            .unwrap_or(false);
        square
            .checked_add(u64::from(bump))
            .ok_or(Error::Overflow("m_n exceeds u64"))
    }
}

#[derive(Clone, Debug)]
pub enum FamilyKind {
    /// `Σ a_i p^{i−1}`, `a_i ∈ {0, …, q−1}`.
    Canonical,
    /// `Σ a_i w_i p^{i−1}` for a sign sequence `w`.
    SignWord(SignPattern),
    /// Digits replaced by representatives of their residue class in `{−1, …, p−2}`.
    Representative(HeadTable),
    /// `τ(I) = i_N` except on `J 0^{m_j}` for a canonical `J` of even index
    /// `j`, where `τ = q`. Each even `n` thus carries one bump `q·p^{N+m_n−1}`,
    /// and longer words passing through such a run carry it in their head.
    Thp(ThpChoices),
    Custom(Arc<dyn RegularMapping>),
}

/// A spectrum family: a finitely described rule producing `λ_n` for every `n ≥ 0`.
#[derive(Clone, Debug)]
pub struct SpectrumFamily {
    params: MeasureParams,
    kind: FamilyKind,
}

impl SpectrumFamily {
    pub fn canonical(params: MeasureParams) -> Self {
        Self {
            params,
            kind: FamilyKind::Canonical,
        }
    }

    pub fn sign_word(params: MeasureParams, pattern: SignPattern) -> Self {
        Self {
            params,
            kind: FamilyKind::SignWord(pattern),
        }
    }

    /// `ρ` given per position and residue; see [`HeadTable`].
    pub fn representative(params: MeasureParams, table: HeadTable) -> Result<Self> {
        table.validate(&params)?;
        Ok(Self {
            params,
            kind: FamilyKind::Representative(table),
        })
    }

    /// The identity choice `ρ(i) = i`.
    pub fn representative_default(params: MeasureParams) -> Result<Self> {
        Self::representative(params, HeadTable::identity(params.q()))
    }

    pub fn thp(params: MeasureParams, choices: ThpChoices) -> Result<Self> {
        if params.q() + 2 > params.p() {
            return Err(Error::Parameter(format!(
                "thp needs q + 2 <= p so that the bump q stays in range, got p = {}, q = {}",
                params.p(),
                params.q()
            )));
        }
        Ok(Self {
            params,
            kind: FamilyKind::Thp(choices),
        })
    }

    pub fn custom_table(params: MeasureParams, mapping: TableMapping) -> Result<Self> {
        mapping.validate(&params)?;
        Ok(Self {
            params,
            kind: FamilyKind::Custom(Arc::new(mapping)),
        })
    }

    /// A user-supplied mapping. Its values are checked lazily, word by word.
    pub fn custom(params: MeasureParams, mapping: Arc<dyn RegularMapping>) -> Self {
        Self {
            params,
            kind: FamilyKind::Custom(mapping),
        }
    }

    pub fn params(&self) -> &MeasureParams {
        &self.params
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Canonical => "canonical",
            FamilyKind::SignWord(_) => "sign-word",
            FamilyKind::Representative(_) => "representative",
            FamilyKind::Thp(_) => "thp",
            FamilyKind::Custom(_) => "custom",
        }
    }

    /// Whether the family is generated by a regular mapping with values in
    /// `{−1, …, p−2}`. The canonical family is one only when `q < p`.
    pub fn is_regular(&self) -> bool {
        match self.kind {
            FamilyKind::Canonical => self.params.q() < self.params.p(),
            FamilyKind::SignWord(_) => false,
            _ => true,
        }
    }

    /// Bounds on every coefficient of every element, head and tail. Regular
    /// families use the full range `{−1, …, p−2}`.
    pub fn coefficient_bounds(&self) -> (i64, i64) {
        let p = i64::from(self.params.p());
        let q = i64::from(self.params.q());
        match &self.kind {
            FamilyKind::SignWord(w) => {
                let lo = if w.has(-1) { -(q - 1) } else { 0 };
                let hi = if w.has(1) { q - 1 } else { 0 };
                (lo, hi)
            }
            _ if self.is_regular() => (-1, p - 2),
            _ => (0, q - 1),
        }
    }

    /// Upper bound on `ℓ_n` over all `n`, when known.
    pub fn tail_bound(&self) -> Option<usize> {
        match &self.kind {
            FamilyKind::Canonical | FamilyKind::SignWord(_) | FamilyKind::Representative(_) => {
                Some(0)
            }
            FamilyKind::Thp(_) => Some(1),
            FamilyKind::Custom(m) => m.tail_bound(),
        }
    }

    /// `τ(prefix)`, unchecked. `all_zero` must say whether every digit of
    /// `prefix` is zero.
    pub(crate) fn head_value(&self, prefix: &[u32], all_zero: bool) -> i64 {
        let k = prefix.len();
        let digit = prefix[k - 1];
        match &self.kind {
            FamilyKind::Canonical => i64::from(digit),
            FamilyKind::Thp(choices) => match tail_position(prefix, self.params.q()) {
                Some((j, t)) if j % 2 == 0 && choices.m(j).ok() == Some(t) => {
                    i64::from(self.params.q())
                }
                _ => i64::from(digit),
            },
            FamilyKind::SignWord(w) => i64::from(digit) * i64::from(w.sign(k)),
            FamilyKind::Representative(table) => table.value(k, digit, all_zero),
            FamilyKind::Custom(m) => m.head(prefix),
        }
    }

    /// Head value with the regularity checks applied.
    pub(crate) fn checked_head(&self, prefix: &[u32], all_zero: bool) -> Result<i64> {
        let value = self.head_value(prefix, all_zero);
        if self.is_regular() {
            check_head_value(
                &self.params,
                prefix.len() as u64,
                prefix[prefix.len() - 1],
                value,
                all_zero,
            )?;
        }
        Ok(value)
    }

    /// Tail bumps of the canonical word with the given index and length, checked.
    pub(crate) fn tail(&self, index: u64, len: usize) -> Result<Vec<TailBump>> {
        let bumps = match &self.kind {
            FamilyKind::Thp(choices) if index.is_multiple_of(2) && index > 0 => vec![TailBump {
                offset: choices.m(index)?,
                value: i64::from(self.params.q()),
            }],
            FamilyKind::Custom(m) => m.tail(index, len),
            _ => Vec::new(),
        };
        if self.is_regular() && !bumps.is_empty() {
            check_tail_values(&self.params, index, &bumps, self.tail_bound())?;
        }
        Ok(bumps)
    }
}

/// For a prefix `J 0^t` with `J` canonical and not the zero word, `t ≥ 1`:
/// the index of `J` and `t`. `None` when the index exceeds `u64`.
fn tail_position(prefix: &[u32], q: u32) -> Option<(u64, u64)> {
    let t = prefix.iter().rev().take_while(|&&d| d == 0).count();
    if t == 0 || t == prefix.len() {
        return None;
    }
    let mut index: u64 = 0;
    for &d in prefix[..prefix.len() - t].iter().rev() {
        index = index.checked_mul(u64::from(q))?.checked_add(u64::from(d))?;
    }
    Some((index, t as u64))
}

fn check_head_value(
    params: &MeasureParams,
    position: u64,
    digit: u32,
    value: i64,
    all_zero: bool,
) -> Result<()> {
    if all_zero && value != 0 {
        return Err(Error::Condition {
            condition: RegularityCondition::ZeroWord,
            detail: format!("tau(0^{position}) = {value}"),
        });
    }
    if value < -1 || value > i64::from(params.p()) - 2 {
        return Err(Error::Range { position, value });
    }
    if (value - i64::from(digit)).rem_euclid(i64::from(params.q())) != 0 {
        return Err(Error::Condition {
            condition: RegularityCondition::Congruence,
            detail: format!(
                "value {value} for digit {digit} at position {position} is not congruent mod {}",
                params.q()
            ),
        });
    }
    Ok(())
}

fn check_tail_values(
    params: &MeasureParams,
    index: u64,
    bumps: &[TailBump],
    bound: Option<usize>,
) -> Result<()> {
    if index == 0 {
        return Err(Error::Condition {
            condition: RegularityCondition::ZeroWord,
            detail: "the zero word carries a tail".into(),
        });
    }
    let mut offsets: Vec<u64> = bumps.iter().map(|b| b.offset).collect();
    offsets.sort_unstable();
    if offsets.first() == Some(&0) || offsets.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Condition {
            condition: RegularityCondition::FiniteTail,
            detail: format!("index {index}: tail offsets must be distinct and at least 1"),
        });
    }
    if let Some(bound) = bound {
        if bumps.len() > bound {
            return Err(Error::Condition {
                condition: RegularityCondition::FiniteTail,
                detail: format!(
                    "index {index} has {} tail values, above the bound {bound}",
                    bumps.len()
                ),
            });
        }
    }
    for b in bumps {
        if b.value < -1 || b.value > i64::from(params.p()) - 2 {
            return Err(Error::Range {
                position: b.offset,
                value: b.value,
            });
        }
        if b.value.rem_euclid(i64::from(params.q())) != 0 {
            return Err(Error::Condition {
                condition: RegularityCondition::Congruence,
                detail: format!(
                    "tail value {} of index {index} is not a multiple of {}",
                    b.value,
                    params.q()
                ),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u32, q: u32) -> MeasureParams {
        MeasureParams::new(p, q).unwrap()
    }

    #[test]
    fn thp_choice_bits() {
        let c = ThpChoices::from_hex("a").unwrap();
        assert_eq!(c.bits(), &[true, false, true, false]);
        assert_eq!(c.m(2).unwrap(), 5);
        assert_eq!(c.m(4).unwrap(), 16);
        assert_eq!(c.m(6).unwrap(), 37);
        assert_eq!(c.m(100).unwrap(), 10_000);
        assert!(ThpChoices::from_hex("xz").is_err());
    }

    #[test]
    fn thp_requires_room_for_the_bump() {
        assert!(SpectrumFamily::thp(params(4, 2), ThpChoices::all_squares()).is_ok());
        assert!(SpectrumFamily::thp(params(3, 3), ThpChoices::all_squares()).is_err());
    }

    #[test]
    fn sign_patterns() {
        let w = SignPattern::parse("-", "+-").unwrap();
        let signs: Vec<i8> = (1..=5).map(|i| w.sign(i)).collect();
        assert_eq!(signs, [-1, 1, -1, 1, -1]);
        assert!(SignPattern::parse("", "").is_err());
        assert!(SignPattern::parse("", "+x").is_err());
        let fam = SpectrumFamily::sign_word(params(4, 2), w);
        assert_eq!(fam.coefficient_bounds(), (-1, 1));
    }

    #[test]
    fn representative_tables_are_checked() {
        let m = params(6, 3);
        assert!(SpectrumFamily::representative(m, HeadTable::new(vec![vec![0, 4, -1]])).is_ok());
        let zero_moved =
            SpectrumFamily::representative(m, HeadTable::new(vec![vec![0, 1, 2], vec![3, 4, -1]]));
        assert!(matches!(
            zero_moved,
            Err(Error::Condition {
                condition: RegularityCondition::FiniteTail,
                ..
            })
        ));
        let wrong_residue = SpectrumFamily::representative(m, HeadTable::new(vec![vec![0, 2, 2]]));
        assert!(matches!(
            wrong_residue,
            Err(Error::Condition {
                condition: RegularityCondition::Congruence,
                ..
            })
        ));
        let out_of_range = SpectrumFamily::representative(m, HeadTable::new(vec![vec![0, 7, 2]]));
        assert!(matches!(out_of_range, Err(Error::Range { .. })));
        let short_row = SpectrumFamily::representative(m, HeadTable::new(vec![vec![0, 1]]));
        assert!(matches!(short_row, Err(Error::Parameter(_))));
    }

    #[test]
    fn table_tails_are_checked() {
        let m = params(4, 2);
        let mut tails = BTreeMap::new();
        tails.insert(
            0,
            vec![TailBump {
                offset: 1,
                value: 2,
            }],
        );
        let mapping = TableMapping {
            head: HeadTable::identity(2),
            tails,
            tail_bound: None,
        };
        assert!(matches!(
            mapping.validate(&m),
            Err(Error::Condition {
                condition: RegularityCondition::ZeroWord,
                ..
            })
        ));

        let mut tails = BTreeMap::new();
        tails.insert(
            3,
            vec![TailBump {
                offset: 2,
                value: 1,
            }],
        );
        let mapping = TableMapping {
            head: HeadTable::identity(2),
            tails,
            tail_bound: None,
        };
        assert!(matches!(
            mapping.validate(&m),
            Err(Error::Condition {
                condition: RegularityCondition::Congruence,
                ..
            })
        ));
    }

    #[test]
    fn table_heads_follow_tails() {
        let m = params(4, 2);
        let mut tails = BTreeMap::new();
        tails.insert(
            1,
            vec![TailBump {
                offset: 1,
                value: 2,
            }],
        );
        let mapping = TableMapping {
            head: HeadTable::identity(2),
            tails,
            tail_bound: Some(1),
        };
        assert_eq!(mapping.head(&[1, 0]), 2);
        assert_eq!(mapping.head(&[1, 0, 0]), 0);
        assert_eq!(mapping.head(&[0, 0]), 0);
        assert_eq!(mapping.head(&[1, 0, 1]), 1);
        assert!(SpectrumFamily::custom_table(m, mapping).is_ok());
    }

    #[test]
    fn tail_positions() {
        assert_eq!(tail_position(&[0, 1, 0, 0], 2), Some((2, 2)));
        assert_eq!(tail_position(&[0, 0], 2), None);
        assert_eq!(tail_position(&[1], 2), None);
        assert_eq!(tail_position(&[2, 1, 0], 3), Some((5, 1)));
    }

    #[test]
    fn canonical_is_regular_only_below_p() {
        assert!(SpectrumFamily::canonical(params(4, 2)).is_regular());
        assert!(!SpectrumFamily::canonical(params(3, 3)).is_regular());
        assert_eq!(
            SpectrumFamily::canonical(params(3, 3)).coefficient_bounds(),
            (0, 2)
        );
        assert_eq!(
            SpectrumFamily::canonical(params(6, 3)).coefficient_bounds(),
            (-1, 4)
        );
    }
}
