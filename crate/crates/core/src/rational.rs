//! Arbitrary-precision rationals and their text encoding.
//!
//! Every probability in the crate is a [`Rational`]. The text form is
//! `"num/den"` (or a bare integer), and the parser additionally accepts finite
//! decimals such as `"0.125"`, which convert exactly.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `num / den` as a reduced rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// Parses `"a/b"`, `"a"`, or a finite decimal like `"-0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::ParseRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !digits_ok(whole_digits) || !digits_ok(frac) || (whole_digits.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let joined = format!("{}{}", if whole_digits.is_empty() { "0" } else { whole_digits }, frac);
        let mut num: BigInt = joined.parse().map_err(|_| bad())?;
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(Rational::new(num, den));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical text form; integers print without a denominator.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `floor(r * 2^64)` clamped to `[0, 2^64]`, used as an exact sampling
/// threshold against a uniform 64-bit draw.
pub fn threshold_u64_scale(r: &Rational) -> u128 {
    if r.is_negative() || r.is_zero() {
        return 0;
    }
    if *r >= Rational::one() {
        return 1u128 << 64;
    }
    let scaled: BigInt = (r.numer() << 64u32) / r.denom();
    let (sign, digits) = scaled.to_u64_digits();
    debug_assert!(sign != Sign::Minus);
    let mut v: u128 = 0;
    for (k, d) in digits.iter().enumerate().take(2) {
        v |= (*d as u128) << (64 * k);
    }
    v
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

pub(crate) fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub(crate) fn serialize_rational_vec<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&format_rational(r))?;
    }
    seq.end()
}

pub(crate) fn deserialize_rational_vec<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
    let raw = Vec::<String>::deserialize(d)?;
    raw.iter()
        .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational(".25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("2/-4").unwrap(), rat(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "abc", "0.5.1", "1/2/3", "1e-3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn format_round_trips() {
        for r in [rat(5, 24), int(0), int(1), rat(-7, 3)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&rat(10, 4)), "5/2");
    }

    #[test]
    fn thresholds_are_exact_floors() {
        assert_eq!(threshold_u64_scale(&rat(1, 2)), 1u128 << 63);
        assert_eq!(threshold_u64_scale(&int(1)), 1u128 << 64);
        assert_eq!(threshold_u64_scale(&int(0)), 0);
        // floor(2^64 / 3)
        assert_eq!(threshold_u64_scale(&rat(1, 3)), (1u128 << 64) / 3);
    }

    proptest::proptest! {
        #[test]
        fn add_then_subtract_is_identity(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = rat(a, b);
            let y = rat(c, d);
            proptest::prop_assert_eq!(&(&x + &y) - &y, x);
        }
    }
}
