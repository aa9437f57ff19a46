use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// The three defining conditions of a regular mapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityCondition {
    /// `τ(0^n) = 0`.
    ZeroWord,
    /// `τ(i_1…i_n) ≡ i_n (mod q)`.
    Congruence,
    /// Only finitely many nonzero tail values per word.
    FiniteTail,
}

impl RegularityCondition {
    pub fn label(self) -> &'static str {
        match self {
            RegularityCondition::ZeroWord => "condition (i)",
            RegularityCondition::Congruence => "condition (ii)",
            RegularityCondition::FiniteTail => "condition (iii)",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// The pair `(p, q)` is outside the supported spectral regime.
    Parameter(String),
    /// An argument outside the domain of a numeric routine.
    Domain(String),
    /// A frequency list contained the same value twice.
    Duplicate(String),
    /// A word that is not in canonical form.
    Form(String),
    /// A mapping value outside `{−1, …, p−2}`.
    Range { position: u64, value: i64 },
    /// A regular-mapping condition does not hold.
    Condition {
        condition: RegularityCondition,
        detail: String,
    },
    /// The family admits no growth bound usable for pruned enumeration.
    UnboundedTail,
    /// No element was found in the requested search range.
    EmptyRange,
    /// The regression inputs do not determine a slope.
    DegenerateFit(String),
    /// An index, exponent or bound exceeded the supported integer width.
    Overflow(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Duplicate(v) => write!(f, "duplicate frequency {v}"),
            Error::Form(msg) => write!(f, "word not in canonical form: {msg}"),
            Error::Range { position, value } => {
                write!(
                    f,
                    "mapping value {value} at position {position} outside {{-1, ..., p-2}}"
                )
            }
            Error::Condition { condition, detail } => {
                write!(
                    f,
                    "regular mapping violates {}: {detail}",
                    condition.label()
                )
            }
            Error::UnboundedTail => {
                write!(
                    f,
                    "family has no growth bound for pruned enumeration; use an index sweep"
                )
            }
            Error::EmptyRange => write!(f, "no element in the search range"),
            Error::DegenerateFit(msg) => write!(f, "degenerate fit: {msg}"),
            Error::Overflow(what) => write!(f, "overflow: {what}"),
        }
    }
}

impl core::error::Error for Error {}
