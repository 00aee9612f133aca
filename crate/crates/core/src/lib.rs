//! Exact machinery for the two-player Levine hat puzzle.
//!
//! Everything that can be exact is exact: functions on `{-1,1}^n` and their
//! Walsh-Hadamard spectra are carried as `2^n`-scaled integers, game values as
//! dyadic rationals with denominator `4^n`. Floating point appears only where
//! a bound involves a logarithm.

pub mod bounds;
pub mod dyadic;
pub mod exec;
pub mod game;
pub mod hypercube;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("dimension {n} out of range [1, {max}] for {what}")]
    DimensionOutOfRange { n: u32, max: u32, what: &'static str },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("strategy file: {0}")]
    StrategyFile(String),
    #[error("optimizer: {0}")]
    Optimizer(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Formats `x` with the given number of significant digits, positional
/// (no exponent), round-half-even per the standard library's float formatting.
pub fn format_significant(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), sig);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if exp >= 0 {
        let ipart = exp as usize + 1;
        if ipart >= digits.len() {
            out.push_str(&digits);
            out.push_str(&"0".repeat(ipart - digits.len()));
        } else {
            out.push_str(&digits[..ipart]);
            out.push('.');
            out.push_str(&digits[ipart..]);
        }
    } else {
        out.push_str("0.");
        out.push_str(&"0".repeat((-exp - 1) as usize));
        out.push_str(&digits);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::format_significant;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.25, 12), "0.250000000000");
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(-1.5, 3), "-1.50");
        assert_eq!(format_significant(0.496235609375, 12), "0.496235609375");
        assert_eq!(format_significant(1234.5, 6), "1234.50");
        assert_eq!(format_significant(1e-4, 12), "0.000100000000000");
    }
}
