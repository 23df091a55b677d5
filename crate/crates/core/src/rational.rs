//! Exact rationals and their `"num/den"` string form.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Reduced `num/den`, always with an explicit denominator.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn parse_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse).collect()
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

pub fn is_interior(r: &Rational) -> bool {
    r.is_positive() && *r < Rational::one()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigUint {
    values.into_iter().fold(BigUint::one(), |acc, r| {
        let d = r.denom().magnitude();
        acc.lcm(d)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_reduce() {
        assert_eq!(format(&parse("2/4").unwrap()), "1/2");
        assert_eq!(format(&parse("3").unwrap()), "3/1");
        assert_eq!(format(&parse(" 0/7 ").unwrap()), "0/1");
        assert_eq!(format(&parse("1/-3").unwrap()), "-1/3");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse("1/0").is_err());
        assert!(parse("a/2").is_err());
        assert!(parse("").is_err());
        assert!(parse("0.5").is_err());
    }

    #[test]
    fn list_and_lcm() {
        let v = parse_list("1/8, 2/8,3/4").unwrap();
        assert_eq!(v, vec![ratio(1, 8), ratio(1, 4), ratio(3, 4)]);
        assert_eq!(common_denominator(&v), BigUint::from(8u32));
    }
}
