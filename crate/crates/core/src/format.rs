//! Fixed-precision decimal rendering shared by CSV and CLI output.

/// Significant digits used for every emitted number.
pub const SIGNIFICANT_DIGITS: usize = 15;

/// `x` rounded to `digits` significant digits, without trailing zeros.
///
/// Plain notation is used for decimal exponents in `[-5, 15)`, scientific
/// notation otherwise. Non-finite values print as `NaN`, `inf`, `-inf`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    // Rounding to `digits` first fixes the exponent, e.g. 9.9999999999999999 -> 10.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

/// [`format_significant`] at [`SIGNIFICANT_DIGITS`].
pub fn fmt15(x: f64) -> String {
    format_significant(x, SIGNIFICANT_DIGITS)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(fmt15(0.0), "0");
        assert_eq!(fmt15(1.0), "1");
        assert_eq!(fmt15(0.02), "0.02");
        assert_eq!(fmt15(-2.5), "-2.5");
        assert_eq!(fmt15(std::f64::consts::LN_2), "0.693147180559945");
        assert_eq!(fmt15(1.0397207708399179), "1.03972077083992");
        assert_eq!(fmt15(123456.0), "123456");
        assert_eq!(fmt15(1e-7), "1e-7");
        assert_eq!(fmt15(1.25e20), "1.25e20");
        assert_eq!(fmt15(f64::NAN), "NaN");
    }

    #[test]
    fn round_trips_to_fifteen_digits() {
        for &x in &[3.104619564445581, 1e-300, 6.02214076e23, 0.1 + 0.2, 9.999999999999999] {
            let back: f64 = fmt15(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-14, "{x} -> {}", fmt15(x));
        }
    }
}
