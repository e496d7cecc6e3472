//! Exact rational arithmetic helpers.
//!
//! Eigenvalue bookkeeping is done with arbitrary-precision rationals so that
//! multiset spectrum comparison never depends on float rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational used for eigenvalues and spectral bounds.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational p/q from integers; `q` must be nonzero.
pub fn from_pair(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p`, `p/q`, or a plain decimal such as `2.5` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::BadRational(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let p: BigInt = num.trim().parse().map_err(|_| bad())?;
        let q: BigInt = den.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.strip_prefix(['-', '+']).unwrap_or(int_part);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) || int_digits.is_empty() {
            return Err(bad());
        }
        let combined: BigInt = format!("{int_digits}{frac_part}").parse().map_err(|_| bad())?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let r = Rational::new(combined, den);
        return Ok(if negative { -r } else { r });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Renders a rational as `p` or `p/q` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest-f64 value of a rational.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational equal to the given finite float (every finite f64 is dyadic).
pub fn from_f64_exact(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::NoExactRepresentation(format!("{x} is not finite")))
}

/// True if the rational is strictly positive.
pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_and_decimals() {
        assert_eq!(parse_rational("1000").unwrap(), from_int(1000));
        assert_eq!(parse_rational("5/2").unwrap(), from_pair(5, 2));
        assert_eq!(parse_rational("2.5").unwrap(), from_pair(5, 2));
        assert_eq!(parse_rational("-3/6").unwrap(), from_pair(-1, 2));
        assert_eq!(parse_rational("0.125").unwrap(), from_pair(1, 8));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "a", "1/0", "1//2", "2.", ".5", "1.2.3", "2x1"] {
            assert!(parse_rational(s).is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&from_pair(4, 2)), "2");
        assert_eq!(format_rational(&from_pair(5, 4)), "5/4");
    }

    #[test]
    fn float_round_trip_is_exact() {
        let r = from_f64_exact(0.1).unwrap();
        assert_eq!(to_f64(&r), 0.1);
    }
}
