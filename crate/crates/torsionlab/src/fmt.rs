//! Numeric formatting for the two output registers: 7 significant digits in
//! human text, 17 in machine formats (lossless f64 round-trip).

/// Rounds to `digits` significant decimal digits; positional notation for
/// moderate magnitudes, scientific otherwise.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..7).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

/// Seven significant digits, the human-text register.
pub fn sig7(x: f64) -> String {
    sig(x, 7)
}

/// Seventeen significant digits: enough to reproduce any f64 exactly.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positional_for_moderate_magnitudes() {
        assert_eq!(sig7(0.035144253738788429), "0.03514425");
        assert_eq!(sig7(2.0), "2.000000");
        assert_eq!(sig7(-0.00092763), "-0.0009276300");
    }

    #[test]
    fn scientific_for_extremes() {
        assert_eq!(sig7(1.2339168190853021e-86), "1.233917e-86");
        assert!(sig7(3.5e9).contains('e'));
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for &x in &[0.1, 0.035144253738788429, -1.0948558378661551, 1e-300] {
            let s = sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn zero_is_plain() {
        assert_eq!(sig7(0.0), "0");
    }
}
