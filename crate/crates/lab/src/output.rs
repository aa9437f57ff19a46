//! Destinations and number formatting shared by the commands.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Sibling path for the structured summary of a delimited table.
pub fn summary_path(table: &Path) -> PathBuf {
    let mut name = table.as_os_str().to_owned();
    name.push(".summary.json");
    PathBuf::from(name)
}

/// Nine significant digits, fixed notation for moderate magnitudes.
pub fn sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        // Rounding can carry into a new leading digit; re-check the width.
        if s.trim_start_matches('-')
            .trim_start_matches("0.")
            .trim_start_matches('0')
            .replace('.', "")
            .len()
            > 9
        {
            return format!("{v:.*}", decimals.saturating_sub(1));
        }
        s
    } else {
        format!("{v:.8e}")
    }
}
