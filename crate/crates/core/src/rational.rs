//! Exact rational parsing and formatting.
//!
//! Payoffs are compared with strict inequalities throughout the crate, so
//! every value is kept as an arbitrary-precision rational. Literals accepted
//! here: `"p/q"` fractions, integers, and decimal/scientific notation
//! (`"0.25"`, `"1e-3"`), all converted exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::InvalidRational(text.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRational(text.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRational(text.to_string()))?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator(text.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| Error::InvalidRational(text.to_string()))
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let lower = s.to_ascii_lowercase();
    let (mantissa, exp10) = match lower.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (lower.as_str(), 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-', '.']) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "+" || digits == "-" {
        return None;
    }
    let n: BigInt = digits.parse().ok()?;
    let ten = BigInt::from(10);
    let shift = frac_part.len() as i64 - exp10;
    Some(if shift >= 0 {
        BigRational::new(n, num_traits::pow(ten, shift as usize))
    } else {
        BigRational::from_integer(n * num_traits::pow(ten, (-shift) as usize))
    })
}

/// Canonical form: `"n"` for integers, `"n/d"` otherwise. Round-trips
/// through [`parse_rational`].
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact rational from a JSON number. Integers map directly; floats go
/// through their shortest round-trip decimal form, so `0.1` parses as 1/10.
pub fn rational_from_json_number(n: &serde_json::Number) -> Result<BigRational> {
    if let Some(i) = n.as_i64() {
        return Ok(BigRational::from_integer(i.into()));
    }
    if let Some(u) = n.as_u64() {
        return Ok(BigRational::from_integer(u.into()));
    }
    parse_decimal(&n.to_string()).ok_or_else(|| Error::InvalidRational(n.to_string()))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root, when the reduced numerator and denominator are both
/// perfect squares.
pub fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let sn = num_integer::Roots::sqrt(r.numer());
    let sd = num_integer::Roots::sqrt(r.denom());
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-4/2").unwrap(), int(-2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(" 2 / 3 ").unwrap(), ratio(2, 3));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("2.5e2").unwrap(), int(250));
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(Error::ZeroDenominator(_))
        ));
        for bad in ["", "x", "1.2.3", "1/2/3", "--4", "1e"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn format_round_trips() {
        for r in [ratio(1, 2), int(-7), ratio(22, 7), int(0)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn json_numbers_convert_exactly() {
        let v: serde_json::Value = serde_json::from_str("[2, -3, 0.5, 2.5e1]").unwrap();
        let nums: Vec<_> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|x| rational_from_json_number(x.as_number().unwrap()).unwrap())
            .collect();
        assert_eq!(nums, vec![int(2), int(-3), ratio(1, 2), int(25)]);
    }

    #[test]
    fn exact_sqrt_detects_perfect_squares() {
        assert_eq!(exact_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(exact_sqrt(&int(16)), Some(int(4)));
        assert_eq!(exact_sqrt(&int(2)), None);
        assert_eq!(exact_sqrt(&int(-4)), None);
    }
}
