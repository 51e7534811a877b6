//! Exact rationals and their text forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `num/den` or a bare integer. Whitespace around the parts is not
/// accepted.
pub fn parse(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Canonical text form: always `num/den`, lowest terms, e.g. `1/1`, `0/1`.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Larger of the numerator and denominator bit lengths.
pub fn bit_size(r: &Rational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rewrites `values` over their least common denominator `d`, returning
/// the integer numerators and `d`.
pub fn common_denominator(values: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let d = values
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let numerators = values
        .iter()
        .map(|r| r.numer() * (&d / r.denom()))
        .collect();
    (numerators, d)
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}
