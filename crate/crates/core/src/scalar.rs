//! Scalar abstraction shared by the exact engine.
//!
//! Everything that manipulates cylinder tables is generic over [`Scalar`];
//! the exact instantiation uses [`Rational`](crate::Rational) so that
//! every identity can be decided with zero tolerance.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Num;

use crate::error::{Error, Result};

/// A real field element usable as a table entry.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// `num / den` in this scalar type.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Scalar for Ratio<i64> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

impl Scalar for Ratio<i128> {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

/// Parses `"p/q"` or `"p"` into a rational in lowest terms.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical string form: lowest terms, positive denominator, `"p"` when
/// the denominator is 1.
pub fn format_rational(r: &BigRational) -> String {
    // `Ratio` keeps itself reduced with a positive denominator.
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_are_canonical() {
        assert_eq!(format_rational(&parse_rational("2/6").unwrap()), "1/3");
        assert_eq!(format_rational(&parse_rational("4/-2").unwrap()), "-2");
        assert_eq!(format_rational(&parse_rational(" 0 ").unwrap()), "0");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn from_ratio_agrees_across_types() {
        assert_eq!(BigRational::from_ratio(2, 4), BigRational::from_ratio(1, 2));
        assert_eq!(Ratio::<i64>::from_ratio(3, 9), Ratio::new(1, 3));
        assert_eq!(f64::from_ratio(1, 4), 0.25);
    }
}
