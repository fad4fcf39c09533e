//! Arbitrary-precision rationals and the small combinatorial number
//! functions used throughout (factorials, double factorials, integer powers).
//!
//! `Rat` is always kept in lowest terms with a positive denominator, so
//! equality is plain structural equality and serialization as `"p/q"` is
//! canonical.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as an exact rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// n! for n >= 0.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Double factorial of an odd integer n >= -1, with the convention
/// (-1)!! = 1. So 5!! = 15, 1!! = 1.
pub fn odd_double_factorial(n: i64) -> BigInt {
    assert!(n >= -1 && n % 2 != 0, "odd_double_factorial needs odd n >= -1, got {n}");
    let mut acc = BigInt::one();
    let mut k = n;
    while k >= 2 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// b^e for e >= 0.
pub fn int_pow(b: i64, e: u32) -> BigInt {
    big(b).pow(e)
}

/// Canonical `"p/q"` form: `"0"`, `"5"`, `"-7/24"`.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Parse `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// True if `r` is a (possibly negative) integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// |r| as a rational.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorial_convention() {
        assert_eq!(odd_double_factorial(-1), big(1));
        assert_eq!(odd_double_factorial(1), big(1));
        assert_eq!(odd_double_factorial(5), big(15));
        assert_eq!(odd_double_factorial(7), big(105));
    }

    #[test]
    fn format_and_parse_roundtrip() {
        for s in ["0", "5", "-7/24", "41/24", "9241/1152"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // Non-canonical inputs normalize.
        assert_eq!(format_rat(&parse_rat("10/4").unwrap()), "5/2");
        assert_eq!(format_rat(&parse_rat("3/-6").unwrap()), "-1/2");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), big(1));
        assert_eq!(factorial(5), big(120));
    }
}
