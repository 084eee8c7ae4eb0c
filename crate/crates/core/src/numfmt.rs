//! `%g`-style decimal formatting with a fixed number of significant digits.

/// Formats `x` with `digits` significant digits, trimming trailing zeros.
/// Uses fixed notation for decimal exponents in `[-5, digits)` and
/// scientific notation otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    // Let the standard formatter do the rounding, then read off the exponent.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Twelve significant digits, used for human-facing tables.
pub fn g12(x: f64) -> String {
    format_sig(x, 12)
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn g17(x: f64) -> String {
    format_sig(x, 17)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_like_printf_g() {
        assert_eq!(g12(0.0), "0");
        assert_eq!(g12(1.0), "1");
        assert_eq!(g12(-0.5), "-0.5");
        assert_eq!(g12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(g12(1e-7), "1e-7");
        assert_eq!(g12(123456789012345.0), "1.23456789012e14");
        assert_eq!(g12(9.9999999999999), "10");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for &x in &[0.1, 1.0 / 3.0, -2.0f64.sqrt(), 1e-300, 6.02214076e23, 0.7071067811865476] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
