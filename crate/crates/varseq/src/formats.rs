//! File formats: sequences (JSON / CSV), exponents (JSON and inline
//! descriptors), weights, and numeric output formatting.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use varseq_core::operators::Grid;
use varseq_core::weights::{Weight, WeightForm};
use varseq_core::{ExponentSequence, Seq};

use crate::AppError;

/// JSON payload for a finitely supported sequence.
#[derive(Debug, Serialize, Deserialize)]
pub struct SeqFile {
    pub support_lo: i64,
    pub values: Vec<f64>,
}

impl SeqFile {
    pub fn from_seq(a: &Seq) -> Self {
        SeqFile {
            support_lo: a.support_lo(),
            values: a.values().to_vec(),
        }
    }

    pub fn into_seq(self) -> Result<Seq, AppError> {
        Seq::new(self.support_lo, self.values).map_err(AppError::from)
    }
}

/// JSON payload for a variable exponent.
#[derive(Debug, Serialize, Deserialize)]
pub struct ExponentFile {
    pub window_lo: i64,
    pub window_hi: i64,
    pub values: Vec<f64>,
    pub tail: f64,
}

impl ExponentFile {
    pub fn from_exponent(p: &ExponentSequence) -> Self {
        ExponentFile {
            window_lo: p.window_lo(),
            window_hi: p.window_hi(),
            values: p.window_values().to_vec(),
            tail: p.tail(),
        }
    }

    pub fn into_exponent(self) -> Result<ExponentSequence, AppError> {
        let expected = self.window_hi - self.window_lo + 1;
        if expected < 0 || self.values.len() as i64 != expected {
            return Err(AppError::input(format!(
                "exponent window [{}, {}] expects {} values, file has {}",
                self.window_lo,
                self.window_hi,
                expected.max(0),
                self.values.len()
            )));
        }
        ExponentSequence::new(self.window_lo, self.values, self.tail).map_err(AppError::from)
    }
}

/// Load a sequence from JSON, or from CSV (`index,value` lines) when the
/// path ends in `.csv`.
pub fn load_seq(path: &Path) -> Result<Seq, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::input(format!("cannot read {}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_seq_csv(&text)
    } else {
        let file: SeqFile = serde_json::from_str(&text)
            .map_err(|e| AppError::input(format!("bad sequence file {}: {e}", path.display())))?;
        file.into_seq()
    }
}

fn parse_seq_csv(text: &str) -> Result<Seq, AppError> {
    let mut entries: Vec<(i64, f64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (idx, val) = line
            .split_once(',')
            .ok_or_else(|| AppError::input(format!("csv line {}: expected index,value", lineno + 1)))?;
        let i: i64 = idx
            .trim()
            .parse()
            .map_err(|e| AppError::input(format!("csv line {}: bad index: {e}", lineno + 1)))?;
        let v: f64 = val
            .trim()
            .parse()
            .map_err(|e| AppError::input(format!("csv line {}: bad value: {e}", lineno + 1)))?;
        entries.push((i, v));
    }
    if entries.is_empty() {
        return Ok(Seq::zero());
    }
    let lo = entries.iter().map(|&(i, _)| i).min().unwrap();
    let hi = entries.iter().map(|&(i, _)| i).max().unwrap();
    let mut values = vec![0.0; (hi - lo + 1) as usize];
    for (i, v) in entries {
        values[(i - lo) as usize] = v;
    }
    Seq::new(lo, values).map_err(AppError::from)
}

/// Write a sequence in the JSON format (exact float round-trip).
pub fn save_seq(a: &Seq, path: &Path) -> Result<(), AppError> {
    let payload = serde_json::to_string_pretty(&SeqFile::from_seq(a))
        .expect("sequence serialization cannot fail");
    fs::write(path, payload + "\n")
        .map_err(|e| AppError::input(format!("cannot write {}: {e}", path.display())))
}

/// Resolve an exponent argument: inline `constant:C`,
/// inline `log-holder:PINF:CINF:LO:HI`, or a JSON file path.
pub fn resolve_exponent_arg(arg: &str) -> Result<ExponentSequence, AppError> {
    if let Some(rest) = arg.strip_prefix("constant:") {
        let c: f64 = rest
            .parse()
            .map_err(|e| AppError::input(format!("bad constant exponent {rest:?}: {e}")))?;
        return ExponentSequence::constant(c).map_err(AppError::from);
    }
    if let Some(rest) = arg.strip_prefix("log-holder:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 4 {
            return Err(AppError::input(
                "log-holder exponent expects log-holder:PINF:CINF:LO:HI".to_string(),
            ));
        }
        let p_inf: f64 = parts[0]
            .parse()
            .map_err(|e| AppError::input(format!("bad PINF: {e}")))?;
        let c_inf: f64 = parts[1]
            .parse()
            .map_err(|e| AppError::input(format!("bad CINF: {e}")))?;
        let lo: i64 = parts[2]
            .parse()
            .map_err(|e| AppError::input(format!("bad LO: {e}")))?;
        let hi: i64 = parts[3]
            .parse()
            .map_err(|e| AppError::input(format!("bad HI: {e}")))?;
        let grid = Grid::new(lo, hi).map_err(AppError::from)?;
        return ExponentSequence::log_holder(p_inf, c_inf, grid).map_err(AppError::from);
    }
    let text = fs::read_to_string(arg)
        .map_err(|e| AppError::input(format!("cannot read exponent {arg}: {e}")))?;
    let file: ExponentFile = serde_json::from_str(&text)
        .map_err(|e| AppError::input(format!("bad exponent file {arg}: {e}")))?;
    file.into_exponent()
}

/// Load a weight from the JSON sequence format; the grid is the file's
/// support window and every value must be strictly positive.
pub fn load_weight(path: &Path) -> Result<Weight, AppError> {
    let seq = load_seq(path)?;
    if seq.is_empty() {
        return Err(AppError::input("weight file has no entries".to_string()));
    }
    let grid = Grid::new(seq.support_lo(), seq.support_hi()).map_err(AppError::from)?;
    Weight::new(grid, seq.values().to_vec()).map_err(AppError::from)
}

/// Short descriptor of a weight for reports.
pub fn describe_weight(w: &Weight) -> String {
    match w.form() {
        Some(WeightForm::Power { delta }) => format!("power({delta})"),
        None => format!("tabulated[{}..{}]", w.grid().lo(), w.grid().hi()),
    }
}

/// Parse `LO:HI` into a grid.
pub fn parse_grid(arg: &str) -> Result<Grid, AppError> {
    let (lo, hi) = arg
        .split_once(':')
        .ok_or_else(|| AppError::input(format!("bad grid {arg:?}: expected LO:HI")))?;
    let lo: i64 = lo
        .parse()
        .map_err(|e| AppError::input(format!("bad grid lower bound {lo:?}: {e}")))?;
    let hi: i64 = hi
        .parse()
        .map_err(|e| AppError::input(format!("bad grid upper bound {hi:?}: {e}")))?;
    Grid::new(lo, hi).map_err(AppError::from)
}

/// Format with `sig` significant digits in plain decimal notation.
pub fn format_significant(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.*}", sig - 1, 0.0);
    }
    // decimal exponent via the scientific formatter (log10 rounding is not
    // reliable near powers of ten)
    let sci = format!("{x:e}");
    let exp: i32 = sci
        .split('e')
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}
