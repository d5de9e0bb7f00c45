//! Scalar contracts shared by every forest sum.
//!
//! Forest sums only ever add and multiply, so they are generic over
//! [`Semiring`]. Building the augmented digraph needs negation ([`Ring`]),
//! and eigenvector components need division ([`Field`]). Exact rationals,
//! `f64` and `Complex64` get all three through blanket impls; the
//! asymptotic scalar of the tropical module is only a semiring.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Semiring:
    Clone + Debug + PartialEq + Zero + One + Add<Output = Self> + Mul<Output = Self> + Send + Sync
{
}

impl<T> Semiring for T where
    T: Clone + Debug + PartialEq + Zero + One + Add<Output = T> + Mul<Output = T> + Send + Sync
{
}

pub trait Ring: Semiring + Neg<Output = Self> + Sub<Output = Self> {}

impl<T> Ring for T where T: Semiring + Neg<Output = T> + Sub<Output = T> {}

pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = T> {}

/// Absolute value as `f64`, used for residuals and norms.
pub trait Magnitude {
    fn magnitude(&self) -> f64;
}

impl Magnitude for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Magnitude for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Magnitude for BigRational {
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// `(-1)^k` in any ring.
pub fn sign_power<S: Ring>(k: usize) -> S {
    if k.is_multiple_of(2) {
        S::one()
    } else {
        -S::one()
    }
}

/// Parses `p/q`, an integer, or a decimal literal (optionally with an
/// exponent) into an exact rational. Decimal literals are read exactly from
/// their digits, so `0.1` is `1/10`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if negative { -value } else { value })
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-7"), Some(q(-7, 1)));
        assert_eq!(parse_rational("0.1"), Some(q(1, 10)));
        assert_eq!(parse_rational("-2.5e-1"), Some(q(-1, 4)));
        assert_eq!(parse_rational("1E3"), Some(q(1000, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
    }

    #[test]
    fn rejects_non_rationals() {
        for bad in ["", "abc", "1/0", "nan", "inf", "1.2.3", "--1", "1e"] {
            assert_eq!(parse_rational(bad), None, "{bad}");
        }
    }

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format_rational(&q(10, 2)), "5");
        assert_eq!(format_rational(&q(-2, 4)), "-1/2");
    }

    #[test]
    fn sign_power_alternates() {
        assert_eq!(sign_power::<f64>(0), 1.0);
        assert_eq!(sign_power::<f64>(3), -1.0);
    }
}
