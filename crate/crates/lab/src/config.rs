//! Run configuration, read from TOML.
//!
//! ```toml
//! [measure]
//! p = 4
//! q = 2
//!
//! [family]
//! kind = "thp"
//! bits = "a5"
//!
//! [limits]
//! index_limit = 256
//! k_max = 6
//!
//! [output]
//! format = "delimited"
//! ```
//!
//! Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spectra_core::coding::{HeadTable, SignPattern, TableMapping, TailBump, ThpChoices};
use spectra_core::{Error as CoreError, MeasureParams, SpectrumFamily};

use crate::error::LabError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub measure: MeasureConfig,
    pub family: FamilyConfig,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    pub p: u32,
    pub q: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyConfig {
    Canonical {},
    /// `signs` is the repeating block, `sign_prefix` an optional lead-in;
    /// both are strings over `+` and `-`.
    SignWord {
        signs: String,
        #[serde(default, skip_serializing_if = "String::is_empty")]
        sign_prefix: String,
    },
    /// Head rows per position, the last repeating. Identity when absent.
    Representative {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rows: Option<Vec<Vec<i64>>>,
    },
    /// Hex choice bits, most significant bit first; bit `j` selects
    /// `m_n = n² + 1` for `n = 2(j + 1)`.
    Thp {
        #[serde(default)]
        bits: String,
    },
    Custom {
        head: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        tails: Vec<TailEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail_bound: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailEntry {
    pub index: u64,
    pub offset: u64,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    /// Elements generated, and checked pairwise by `check`.
    pub index_limit: u64,
    /// Radius for counting and density windows; defaults depend on the command.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_radius: Option<i64>,
    pub k_max: u32,
    pub tolerance: f64,
    pub candidate_radius: i64,
    /// Defaults to `p² · candidate_radius`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_radius: Option<i64>,
    /// Even indices used by the lacunarity check.
    pub even_count: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            index_limit: 1024,
            search_radius: None,
            k_max: 6,
            tolerance: 1e-9,
            candidate_radius: 64,
            witness_radius: None,
            even_count: 50,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    /// Tab-separated table with a header line.
    #[default]
    Delimited,
    /// One JSON document.
    Structured,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LabError> {
        toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    pub fn params(&self) -> Result<MeasureParams, LabError> {
        MeasureParams::new(self.measure.p, self.measure.q)
            .map_err(|e| LabError::Config(e.to_string()))
    }

    /// Builds the family, validating every table against the regularity
    /// conditions before any computation runs.
    pub fn family(&self) -> Result<SpectrumFamily, LabError> {
        let params = self.params()?;
        let invalid = |e: CoreError| LabError::Invalid(e);
        let family = match &self.family {
            FamilyConfig::Canonical {} => SpectrumFamily::canonical(params),
            FamilyConfig::SignWord { signs, sign_prefix } => SpectrumFamily::sign_word(
                params,
                SignPattern::parse(sign_prefix, signs).map_err(invalid)?,
            ),
            FamilyConfig::Representative { rows: None } => {
                SpectrumFamily::representative_default(params).map_err(invalid)?
            }
            FamilyConfig::Representative { rows: Some(rows) } => {
                SpectrumFamily::representative(params, HeadTable::new(rows.clone()))
                    .map_err(invalid)?
            }
            FamilyConfig::Thp { bits } => {
                SpectrumFamily::thp(params, ThpChoices::from_hex(bits).map_err(invalid)?)
                    .map_err(invalid)?
            }
            FamilyConfig::Custom {
                head,
                tails,
                tail_bound,
            } => {
                let mut table: BTreeMap<u64, Vec<TailBump>> = BTreeMap::new();
                for t in tails {
                    table.entry(t.index).or_default().push(TailBump {
                        offset: t.offset,
                        value: t.value,
                    });
                }
                let mapping = TableMapping {
                    head: HeadTable::new(head.clone()),
                    tails: table,
                    tail_bound: *tail_bound,
                };
                SpectrumFamily::custom_table(params, mapping).map_err(invalid)?
            }
        };
        self.check_limits()?;
        Ok(family)
    }

    fn check_limits(&self) -> Result<(), LabError> {
        let l = &self.limits;
        let bad = |msg: &str| Err(LabError::Config(format!("limits: {msg}")));
        if l.index_limit < 1 {
            return bad("index_limit must be at least 1");
        }
        if l.k_max < 2 {
            return bad("k_max must be at least 2");
        }
        if l.tolerance.is_nan() || l.tolerance < 0.0 {
            return bad("tolerance must be nonnegative");
        }
        if l.search_radius.is_some_and(|r| r < 0) || l.candidate_radius < 0 {
            return bad("radii must be nonnegative");
        }
        if l.witness_radius.is_some_and(|w| w < l.candidate_radius) {
            return bad("witness_radius must be at least candidate_radius");
        }
        if l.even_count < 2 {
            return bad("even_count must be at least 2");
        }
        Ok(())
    }
}
