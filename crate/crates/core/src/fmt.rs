//! Fixed decimal formatting for exported artifacts.
//!
//! Every file the pipeline writes prints floats through [`sig12`] so that
//! identical inputs produce byte-identical outputs.

/// Formats `x` with 12 significant digits, trimming trailing zeros
/// (the `printf "%.12g"` convention).
pub fn sig12(x: f64) -> String {
    sig(x, 12)
}

/// Rounds `x` to 12 significant digits and returns the rounded value.
///
/// `sig12(round12(x)) == sig12(x)` and the returned f64 parses back from
/// that string exactly, so CSV cells and JSON numbers carry the same value.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    sig12(x).parse().expect("sig12 output is a valid f64")
}

/// `%.<digits>g`-style formatting.
pub fn sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1, "need at least one significant digit");
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }

    // Rust's scientific formatter rounds to the requested precision and keeps
    // the mantissa normalized in [1, 10), which does the hard part for us.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("{:e} always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let sign = if mantissa.starts_with('-') { "-" } else { "" };

    let all_digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let trimmed = all_digits.trim_end_matches('0');
    let digits_str = if trimmed.is_empty() { "0" } else { trimmed };
    let ndigits = digits_str.len() as i32;

    if exp >= -4 && exp < digits as i32 {
        if exp >= ndigits - 1 {
            let zeros = "0".repeat((exp - ndigits + 1) as usize);
            format!("{sign}{digits_str}{zeros}")
        } else if exp >= 0 {
            let (int_part, frac_part) = digits_str.split_at((exp + 1) as usize);
            format!("{sign}{int_part}.{frac_part}")
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("{sign}0.{zeros}{digits_str}")
        }
    } else {
        let (head, tail) = digits_str.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_values() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(0.25), "0.25");
        assert_eq!(sig12(1.25), "1.25");
        assert_eq!(sig12(1000.0), "1000");
        assert_eq!(sig12(-0.0001), "-0.0001");
        assert_eq!(sig12(1.0), "1");
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(20015.086796020572), "20015.086796");
        assert_eq!(sig12(123456789012345.0), "1.23456789012e14");
    }

    #[test]
    fn scientific_fallback() {
        assert_eq!(sig12(1e-5), "1e-5");
        assert_eq!(sig12(1e15), "1e15");
        assert_eq!(sig12(-2.5e-7), "-2.5e-7");
    }

    #[test]
    fn rounding_across_a_power_of_ten() {
        // 0.99999999999996 rounds up to 1 at 12 significant digits.
        assert_eq!(sig12(0.99999999999996), "1");
        assert_eq!(sig12(9.99999999999996), "10");
    }

    #[test]
    fn round12_round_trips() {
        for &x in &[0.25, 1.0 / 3.0, 20015.086796020572, -7.25e-13, 1e20] {
            let r = round12(x);
            assert_eq!(sig12(r), sig12(x));
            let reparsed: f64 = sig12(x).parse().unwrap();
            assert_eq!(reparsed.to_bits(), r.to_bits());
        }
    }
}
