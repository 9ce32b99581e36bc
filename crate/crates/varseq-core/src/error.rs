//! Error type shared by all core operations.

use core::fmt;

/// Rejection reasons for operations with checked preconditions.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// The exponent has `p_- <= 1 + guard`, so pointwise conjugation (and any
    /// construction that needs it) is undefined.
    ExponentNotInClassP { p_minus: f64, guard: f64 },
    /// `1/q = 1/p - alpha` has no admissible solution because `p_+ >= 1/alpha`.
    SobolevUndefined { p_plus: f64, alpha: f64 },
    /// A scalar parameter is outside its admissible range.
    InvalidParameter {
        name: &'static str,
        value: f64,
        requires: &'static str,
    },
    /// The sequence support sticks out of the grid the operation runs on.
    SupportOutsideGrid {
        support_lo: i64,
        support_hi: i64,
        grid_lo: i64,
        grid_hi: i64,
    },
    /// The operation needs a nonzero sequence.
    ZeroSequence,
    /// A non-negative sequence was required but a negative entry was found.
    NegativeEntry { index: i64, value: f64 },
    /// Weights must be strictly positive and finite.
    NonPositiveWeight { index: i64, value: f64 },
    /// A value failed a structural validity check (non-finite, wrong length, ...).
    InvalidInput(&'static str),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::ExponentNotInClassP { p_minus, guard } => write!(
                f,
                "exponent not in class P: p_- = {p_minus} is not above 1 + {guard}"
            ),
            CoreError::SobolevUndefined { p_plus, alpha } => write!(
                f,
                "Sobolev relation undefined: p_+ = {p_plus} >= 1/alpha = {}",
                1.0 / alpha
            ),
            CoreError::InvalidParameter {
                name,
                value,
                requires,
            } => write!(f, "parameter {name} = {value} invalid: requires {requires}"),
            CoreError::SupportOutsideGrid {
                support_lo,
                support_hi,
                grid_lo,
                grid_hi,
            } => write!(
                f,
                "support [{support_lo}, {support_hi}] not contained in grid [{grid_lo}, {grid_hi}]"
            ),
            CoreError::ZeroSequence => write!(f, "operation requires a nonzero sequence"),
            CoreError::NegativeEntry { index, value } => {
                write!(f, "negative entry {value} at index {index}")
            }
            CoreError::NonPositiveWeight { index, value } => {
                write!(f, "weight entry {value} at index {index} is not strictly positive")
            }
            CoreError::InvalidInput(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for CoreError {}

pub type Result<T> = core::result::Result<T, CoreError>;
