//! Fixed-precision number rendering shared by every CSV/JSON writer.
//!
//! All emitted numbers carry 12 significant digits, rendered like C's `%.12g`:
//! positional notation for decimal exponents in `[-4, 12)`, scientific
//! otherwise, trailing zeros removed.

pub const SIG_DIGITS: usize = 12;

/// Render `x` with 12 significant digits.
pub fn sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        strip_zeros(format!("{:.*}", decimals, x))
    } else {
        let mantissa = strip_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", mantissa, sign, exp.abs())
    }
}

/// Round `x` to 12 significant digits, for JSON emission.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    sig(x).parse().unwrap_or(x)
}

fn strip_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_percent_g() {
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(-2.5), "-2.5");
        assert_eq!(sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig(4.0 / 3.0), "1.33333333333");
        assert_eq!(sig(1.0 / 3.0 * 1e-7), "3.33333333333e-08");
        assert_eq!(sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(sig(0.0001), "0.0001");
        assert_eq!(sig(1e-5), "1e-05");
        assert_eq!(sig(-1e-20), "-1e-20");
    }

    #[test]
    fn rounding_carries_into_exponent() {
        assert_eq!(sig(9.9999999999999), "10");
        assert_eq!(sig(0.99999999999999), "1");
    }

    #[test]
    fn round_trip_is_stable() {
        for x in [std::f64::consts::PI, 1e-9 / 7.0, 12345.678901234567] {
            let r = round_sig(x);
            assert_eq!(sig(r), sig(x));
            assert_eq!(round_sig(r), r);
        }
    }
}
