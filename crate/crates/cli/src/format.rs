//! Deterministic number formatting for tables, reports, and SVG data.

/// Significant digits kept in every emitted number.
pub const SIG_DIGITS: usize = 12;

/// Rounds to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIG_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest round-trip decimal of `x` rounded to [`SIG_DIGITS`] digits.
/// Negative zero prints as `0`.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x))
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}
