//! Small output helpers shared by the CLI and the examples.

/// Formats a non-negative score to 12 significant digits in plain decimal
/// notation (no locale, no exponent), e.g. `14/3` prints as
/// `4.66666666667`.
pub fn format_score(x: f64) -> String {
    format_sig(x, 12)
}

/// Plain-decimal formatting with `sig` significant digits.
pub fn format_sig(x: f64, sig: usize) -> String {
    assert!(x.is_finite() && sig >= 1);
    if x == 0.0 {
        return format!("{:.*}", sig - 1, 0.0);
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (sig as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_score(14.0 / 3.0), "4.66666666667");
        assert_eq!(format_score(0.0), "0.00000000000");
        assert_eq!(format_score(15.0), "15.0000000000");
        assert_eq!(format_score(0.5), "0.500000000000");
        assert_eq!(format_score(1.0), "1.00000000000");
    }
}
