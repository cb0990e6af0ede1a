use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::codec::tokenize_dense;
use crate::model::{Tuple, TupleItem, TupleItems};

use super::{parse_rational, Rational, SemanticsError};

/// The number `a + b·√c`, stored in normal form: `c ≥ 0`, and `b = 0`
/// exactly when `c = 0`. The radicand is not reduced further, so `(0,1,4)`
/// and `(2,0,0)` are different values of this type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, SemanticsError> {
        if c.signum() < 0 {
            return Err(SemanticsError::NegativeRadicand(c));
        }
        if b.is_zero() || c.is_zero() {
            return Ok(Self::rational(a));
        }
        Ok(Self { a, b, c })
    }

    pub fn rational(a: Rational) -> Self {
        Self {
            a,
            b: Rational::zero(),
            c: Rational::zero(),
        }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn neg(&self) -> Self {
        Self {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
        }
    }

    fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::rational(Rational::zero());
        }
        Self {
            a: &self.a * k,
            b: &self.b * k,
            c: self.c.clone(),
        }
    }

    fn shift(&self, k: &Rational) -> Self {
        Self {
            a: &self.a + k,
            ..self.clone()
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}√{}", self.b, self.c)
        } else if self.b.signum() < 0 {
            write!(f, "({}-{}√{})", self.a, self.b.abs(), self.c)
        } else {
            write!(f, "({}+{}√{})", self.a, self.b, self.c)
        }
    }
}

/// Reads a tuple of three rational tokens `a b c`.
pub fn quad_from_tuple(t: &Tuple) -> Result<QuadExt, SemanticsError> {
    let tokens: Vec<String> = match &t.items {
        TupleItems::Text(raw) => tokenize_dense(raw),
        TupleItems::Items(items) => items
            .iter()
            .map(|item| match item {
                TupleItem::Element(s) => Ok(s.trim().to_owned()),
                _ => Err(SemanticsError::Shape(
                    "coefficient tuple holds a non-scalar item".into(),
                )),
            })
            .collect::<Result<_, _>>()?,
    };
    let [a, b, c] = tokens.as_slice() else {
        return Err(SemanticsError::Arity {
            expected: 3,
            found: tokens.len(),
        });
    };
    QuadExt::new(parse_rational(a)?, parse_rational(b)?, parse_rational(c)?)
}

/// Exact sign of `a + b·√c`, using rational arithmetic only.
pub fn quad_sign(q: &QuadExt) -> i8 {
    let sa = q.a.signum();
    let sb = q.b.signum();
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let a2 = &q.a * &q.a;
    let b2c = &(&q.b * &q.b) * &q.c;
    match a2.cmp(&b2c) {
        std::cmp::Ordering::Greater => sa,
        std::cmp::Ordering::Less => sb,
        std::cmp::Ordering::Equal => 0,
    }
}

/// `⌊a + b·√c⌋`, exactly.
fn floor(q: &QuadExt) -> BigInt {
    // Write the value as (A + B·√C) / D with integers A, B, C and D > 0.
    let (r, s) = (q.c.numer(), q.c.denom());
    let big_c = r * s;
    let b_over_s = &q.b / &Rational::from_integer(s.clone());
    let d = q.a.denom().lcm(b_over_s.denom());
    let big_a = q.a.numer() * (&d / q.a.denom());
    let big_b = b_over_s.numer() * (&d / b_over_s.denom());
    // floor(B·√C) via an integer square root.
    let sq = &big_b * &big_b * &big_c;
    let root = sq.sqrt();
    let exact = &root * &root == sq;
    let t = match big_b.sign() {
        Sign::Minus if exact => -root,
        Sign::Minus => -root - 1,
        _ => root,
    };
    // floor(u / D) = floor(floor(u) / D) for integer D > 0.
    (big_a + t).div_floor(&d)
}

const SIGNIFICANT: u32 = 12;

/// Decimal approximation of `a + b·√c` with 12 significant digits,
/// rounded half to even.
pub fn quad_approx(q: &QuadExt) -> String {
    let sign = quad_sign(q);
    if sign == 0 {
        return format!("0.{}", "0".repeat(SIGNIFICANT as usize - 1));
    }
    let y = if sign < 0 { q.neg() } else { q.clone() };
    let ten = Rational::from_integer(10);
    let pow10 = |k: i64| -> Rational {
        let p = Rational::from_integer(BigInt::from(10).pow(k.unsigned_abs() as u32));
        if k >= 0 {
            p
        } else {
            Rational::one() / p
        }
    };
    // Decimal exponent e with 10^e ≤ y < 10^(e+1).
    let whole = floor(&y);
    let mut e: i64 = if whole.is_positive() {
        whole.to_string().len() as i64 - 1
    } else {
        let mut k = 0;
        let mut z = y.clone();
        while floor(&z).is_zero() {
            z = z.scale(&ten);
            k -= 1;
        }
        k
    };
    let z = y.scale(&pow10(SIGNIFICANT as i64 - 1 - e));
    let mut n = floor(&z);
    let half = Rational::new(1, 2);
    let rest = z.shift(&-(Rational::from_integer(n.clone()) + half));
    let round_up = match quad_sign(&rest) {
        1 => true,
        -1 => false,
        _ => n.is_odd(),
    };
    if round_up {
        n += 1;
    }
    if n == BigInt::from(10).pow(SIGNIFICANT) {
        n /= 10;
        e += 1;
    }
    let digits = n.to_string();
    let body = if e >= SIGNIFICANT as i64 - 1 {
        format!("{digits}{}", "0".repeat((e - (SIGNIFICANT as i64 - 1)) as usize))
    } else if e >= 0 {
        let (int, frac) = digits.split_at(e as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{digits}", "0".repeat((-e - 1) as usize))
    };
    if sign < 0 {
        format!("-{body}")
    } else {
        body
    }
}
