//! High-precision binary floats for the Aluthge transforms.
//!
//! Transformed weights involve square roots of rationals, so they are held
//! as `astro_float::BigFloat` at a caller-chosen precision. Conversions back
//! to [`Rational`] are exact, which lets tolerances be compared without any
//! further rounding.

use astro_float::{BigFloat, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use astro_float::BigFloat as Float;

/// Default mantissa precision in bits.
pub const DEFAULT_PRECISION: usize = 256;
pub const MIN_PRECISION: usize = 64;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

pub fn check_precision(bits: usize) -> Result<usize> {
    if bits < MIN_PRECISION {
        return Err(Error::invalid(format!(
            "precision must be at least {MIN_PRECISION} bits, got {bits}"
        )));
    }
    Ok(bits)
}

fn bigint_to_float(n: &BigInt) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    if digits.is_empty() {
        return BigFloat::from_u64(0, 64);
    }
    let sign = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
    // mantissa words are read as a fraction in [1/2, 1), scaled by 2^e
    BigFloat::from_words(&digits, sign, (64 * digits.len()) as i32)
}

/// Nearest float to `r` at `precision` bits.
pub fn to_float(r: &Rational, precision: usize) -> BigFloat {
    let n = bigint_to_float(r.numer());
    let d = bigint_to_float(r.denom());
    n.div(&d, precision, RM)
}

/// The exact value of a finite float.
pub fn to_rational(f: &BigFloat) -> Rational {
    let (words, _, sign, exponent, _) = f.as_raw_parts().expect("finite float");
    if words.iter().all(|w| *w == 0) {
        return Rational::zero();
    }
    let mut mantissa = BigUint::zero();
    for w in words.iter().rev() {
        mantissa = (mantissa << 64) + BigUint::from(*w);
    }
    // value = mantissa / 2^(64·len) · 2^exponent
    let shift = exponent as i64 - 64 * words.len() as i64;
    let mut numer = BigInt::from(mantissa);
    let mut denom = BigInt::one();
    if shift >= 0 {
        numer <<= shift as usize;
    } else {
        denom <<= (-shift) as usize;
    }
    if sign == Sign::Neg {
        numer = -numer;
    }
    Rational::from_bigints(numer, denom).expect("nonzero denominator")
}

/// `2^-bits` as an exact rational.
pub fn pow2_neg(bits: usize) -> Rational {
    Rational::from_bigints(BigInt::one(), BigInt::one() << bits).expect("nonzero")
}

/// `|a - b| / |b|`, or `|a|` when `b` is zero.
pub fn relative_deviation(a: &BigFloat, b: &BigFloat, precision: usize) -> BigFloat {
    let diff = a.sub(b, precision, RM).abs();
    if b.is_zero() {
        diff
    } else {
        diff.div(&b.abs(), precision, RM)
    }
}

/// Scientific notation with `digits` significant decimal digits.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    let ten = BigInt::from(10);
    let (n, d) = (abs.numer().clone(), abs.denom().clone());
    // First guess from the bit lengths, then correct.
    let mut e = ((n.bits() as f64 - d.bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let pow = |k: i64| num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
    let ge_pow10 = |k: i64| {
        if k >= 0 {
            n >= &d * pow(k)
        } else {
            &n * pow(k) >= d
        }
    };
    while !ge_pow10(e) {
        e -= 1;
    }
    while ge_pow10(e + 1) {
        e += 1;
    }
    let scale = digits as i64 - 1 - e;
    let (num, den) = if scale >= 0 {
        (&n * pow(scale), d.clone())
    } else {
        (n.clone(), &d * pow(scale))
    };
    // round half up
    let mut m: BigInt = (2 * num + &den) / (2 * den);
    if m >= pow(digits as i64) {
        m /= &ten;
        e += 1;
    }
    let s = m.abs().to_string();
    let (head, tail) = s.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// Significant decimal digits carried by `precision` bits.
pub fn decimal_digits(precision: usize) -> usize {
    ((precision as f64) * std::f64::consts::LOG10_2).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn round_trip_of_dyadics_is_exact() {
        for r in [q(3, 1), q(1, 2), q(-5, 8), q(1, 1 << 40), q(0, 1), q(123456789, 1)] {
            assert_eq!(to_rational(&to_float(&r, 64)), r);
        }
    }

    #[test]
    fn rounding_error_is_within_precision() {
        let r = q(2, 3);
        let back = to_rational(&to_float(&r, 256));
        assert!((back - &r).abs() / r < pow2_neg(255));
    }

    #[test]
    fn large_integers_convert() {
        let big: Rational = "340282366920938463463374607431768211457/3".parse().unwrap();
        let back = to_rational(&to_float(&big, 512));
        assert!((back - &big).abs() / big < pow2_neg(500));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_decimal(&q(1, 3), 5), "3.3333e-1");
        assert_eq!(format_decimal(&q(2, 3), 3), "6.67e-1");
        assert_eq!(format_decimal(&q(-250, 1), 2), "-2.5e2");
        assert_eq!(format_decimal(&q(999, 1000), 2), "1.0e0");
        assert_eq!(format_decimal(&q(1, 1), 1), "1e0");
        assert_eq!(format_decimal(&q(0, 1), 4), "0");
    }

    #[test]
    fn precision_floor() {
        assert!(check_precision(63).is_err());
        assert_eq!(check_precision(64).unwrap(), 64);
    }
}
