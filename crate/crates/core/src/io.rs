//! Text formats: truth-table files and CSV number formatting.
//!
//! A truth-table file is a line `n=<int>` followed by `2^n` characters `0`/`1`,
//! character `m` being the value at point index `m` (`1` means `+1`).
//! Whitespace between table characters is ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::cube::BooleanFunction;
use crate::error::{Error, Result};
use crate::transform::FourierSpectrum;

/// Formats a float for CSV text: shortest representation that round-trips,
/// `.` as decimal separator, exponent form for very large or small
/// magnitudes, no trailing `.0` and no negative zero.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let s = format!("{x:?}");
    match s.strip_suffix(".0") {
        Some(int) => int.to_string(),
        None => s,
    }
}

/// Parses the truth-table format.
pub fn parse_truth_table(text: &str) -> Result<BooleanFunction> {
    let text = text.trim_start();
    let (header, rest) = text.split_once('\n').unwrap_or((text, ""));
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .ok_or_else(|| Error::Parse(format!("expected `n=<int>` header, found {header:?}")))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad dimension in header {header:?}: {e}")))?;
    crate::cube::check_dim(n)?;
    let mut values = Vec::with_capacity(1 << n);
    for (pos, c) in rest.chars().filter(|c| !c.is_whitespace()).enumerate() {
        match c {
            '0' => values.push(false),
            '1' => values.push(true),
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {other:?} at table position {pos}"
                )))
            }
        }
    }
    if values.len() != 1 << n {
        return Err(Error::Parse(format!(
            "table has {} entries, expected 2^{n} = {}",
            values.len(),
            1usize << n
        )));
    }
    BooleanFunction::from_index_fn(n, |m| values[m])
}

pub fn read_truth_table(path: &Path) -> Result<BooleanFunction> {
    parse_truth_table(&fs::read_to_string(path)?)
}

/// Renders the truth-table format, newline terminated.
pub fn format_truth_table(b: &BooleanFunction) -> String {
    let mut out = format!("n={}\n", b.n());
    out.extend((0..b.len()).map(|m| if b.is_plus(m) { '1' } else { '0' }));
    out.push('\n');
    out
}

/// Table characters only, as used for class identifiers in reports.
pub fn table_string(b: &BooleanFunction) -> String {
    (0..b.len())
        .map(|m| if b.is_plus(m) { '1' } else { '0' })
        .collect()
}

/// Spectrum CSV with columns `mask,coeff`, one row per subset.
pub fn spectrum_csv(s: &FourierSpectrum) -> String {
    let mut out = String::from("mask,coeff\n");
    for (mask, c) in s.coeffs().iter().enumerate() {
        let _ = writeln!(out, "{mask},{}", fmt_f64(*c));
    }
    out
}
