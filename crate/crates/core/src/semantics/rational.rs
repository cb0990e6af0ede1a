use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::SemanticsError;

/// Exact fraction in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s)
    }
}

/// Parses `[+-]digits` or `[+-]digits/digits`.
pub fn parse_rational(token: &str) -> Result<Rational, SemanticsError> {
    let err = || SemanticsError::Parse(token.to_owned());
    let unsigned = token.strip_prefix(['+', '-']).unwrap_or(token);
    let (num, den) = match unsigned.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (unsigned, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.is_none_or(digits) {
        return Err(err());
    }
    let mut n: BigInt = num.parse().map_err(|_| err())?;
    if token.starts_with('-') {
        n = -n;
    }
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| err())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(SemanticsError::ZeroDenominator(token.to_owned()));
    }
    Ok(Rational::new(n, d))
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(r("1/3"), Rational::new(1, 3));
        assert_eq!(r("-1"), Rational::from_integer(-1));
        assert_eq!(r("1/9").to_string(), "1/9");
        assert_eq!(r("2/4").to_string(), "1/2");
        assert_eq!(r("+7"), Rational::from_integer(7));
        assert_eq!(r("-0").to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "-", "1/", "/2", "1.5", "1/-2", "a", "1 2", "--1", "1e3"] {
            assert!(matches!(parse_rational(bad), Err(SemanticsError::Parse(_))), "{bad}");
        }
        assert_eq!(
            parse_rational("1/0"),
            Err(SemanticsError::ZeroDenominator("1/0".into()))
        );
    }

    #[test]
    fn denominator_is_positive() {
        let x = Rational::new(3, -6);
        assert_eq!(x.to_string(), "-1/2");
        assert_eq!(x.signum(), -1);
        assert!(x.denom() > &BigInt::zero());
    }
}
