//! Arbitrary-precision rational numbers and square-root helpers.
//!
//! `Rational` is backed by `num_rational::BigRational`, which already keeps
//! values in lowest terms with a positive denominator.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Shorthand constructor from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand constructor from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    match n.sign() {
        Sign::Minus => None,
        Sign::NoSign => Some(BigInt::zero()),
        Sign::Plus => {
            let r = n.sqrt();
            (&r * &r == *n).then_some(r)
        }
    }
}

/// The nonnegative square root of `r`, if it is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = perfect_sqrt(r.numer())?;
    let den = perfect_sqrt(r.denom())?;
    Some(Rational::new(num, den))
}

/// `r` as a nonnegative machine integer, if it is one.
pub fn as_usize(r: &Rational) -> Option<usize> {
    if !r.is_integer() || r.is_negative() {
        return None;
    }
    let n = r.numer();
    u64::try_from(n).ok().map(|v| v as usize)
}

/// True iff `r` is an integer (of any sign).
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}
