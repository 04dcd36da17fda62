//! Deterministic float formatting for machine-readable output.
//!
//! All emitted numbers use a fixed 15-significant-digit format (the `%.15g`
//! convention) rather than shortest-roundtrip printing, so identical inputs
//! produce byte-identical output.

/// Formats with 15 significant digits, trailing zeros stripped; falls back to
/// scientific notation outside the [1e-4, 1e15) magnitude range.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("{:e} always contains 'e'");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        trim_fraction(fixed)
    } else {
        let mantissa = trim_fraction(mantissa.to_string());
        format!("{mantissa}e{exp}")
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::sig15;

    #[test]
    fn plain_values() {
        assert_eq!(sig15(0.0), "0");
        assert_eq!(sig15(1.0), "1");
        assert_eq!(sig15(-2.5), "-2.5");
        assert_eq!(sig15(0.125), "0.125");
        assert_eq!(sig15(100.0), "100");
    }

    #[test]
    fn fifteen_significant_digits() {
        // f64(1 + sqrt 2) = 2.4142135623730949234...; %.15g agrees
        assert_eq!(sig15(1.0 + 2.0_f64.sqrt()), "2.41421356237309");
        assert_eq!(sig15(1.0 / 3.0), "0.333333333333333");
    }

    #[test]
    fn scientific_for_extremes() {
        assert_eq!(sig15(1.0e-6), "1e-6");
        assert_eq!(sig15(2.5e20), "2.5e20");
        assert_eq!(sig15(-3.25e-9), "-3.25e-9");
    }

    #[test]
    fn round_trips_to_close_value() {
        for &x in &[std::f64::consts::PI, 1e-3, 123456.789, 9.999999999999999e14] {
            let back: f64 = sig15(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-14 * x.abs());
        }
    }
}
