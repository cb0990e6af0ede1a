//! High-precision decimal reference for `a + b·√c`, computed by scaling to
//! integers and taking integer square roots.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// A fraction given as `(numerator, denominator)` with a positive denominator.
pub type Frac = (BigInt, BigInt);

pub fn frac(token: &str) -> Frac {
    let (n, d) = token.split_once('/').unwrap_or((token, "1"));
    let n: BigInt = n.parse().expect("numerator");
    let d: BigInt = d.parse().expect("denominator");
    assert!(d.is_positive(), "denominator must be positive");
    (n, d)
}

fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    let q = n / d;
    if (n % d).is_zero() || n.is_positive() == d.is_positive() {
        q
    } else {
        q - 1
    }
}

/// `(a + b·√c) · 10^digits`, within 2 of the true value.
pub fn scaled_approximation(a: &Frac, b: &Frac, c: &Frac, digits: u32) -> BigInt {
    let scale = BigInt::from(10).pow(digits);
    let a_part = floor_div(&(&a.0 * &scale), &a.1);
    let radicand = (&b.0 * &b.0) * &c.0 * &scale * &scale;
    let denom = (&b.1 * &b.1) * &c.1;
    let root = (radicand / denom).sqrt();
    let b_part = if b.0.is_negative() { -root } else { root };
    a_part + b_part
}

/// Sign of `a + b·√c` from a 50-digit approximation, or `None` when the
/// value is too close to zero to tell.
pub fn approximate_sign(a: &Frac, b: &Frac, c: &Frac) -> Option<i8> {
    let x = scaled_approximation(a, b, c, 50);
    if x > BigInt::from(2) {
        Some(1)
    } else if x < BigInt::from(-2) {
        Some(-1)
    } else {
        None
    }
}

/// Whether `|a + b·√c| > 10^-exp`, judged from the 50-digit approximation.
pub fn exceeds(a: &Frac, b: &Frac, c: &Frac, exp: u32) -> bool {
    let x = scaled_approximation(a, b, c, 50).abs();
    x > BigInt::from(10).pow(50 - exp) + 2
}

/// The value as a decimal string with `sig` significant digits, taken from
/// a 50-digit approximation with round-half-even on the truncated digits.
pub fn decimal(a: &Frac, b: &Frac, c: &Frac, sig: usize) -> String {
    let x = scaled_approximation(a, b, c, 50);
    let negative = x.is_negative();
    let digits = x.abs().to_string();
    if digits == "0" {
        return format!("0.{}", "0".repeat(sig - 1));
    }
    // value = digits · 10^-50; exponent of the leading digit:
    let mut exp = digits.len() as i64 - 1 - 50;
    let mut kept: Vec<u8> = digits.bytes().take(sig).map(|b| b - b'0').collect();
    while kept.len() < sig {
        kept.push(0);
    }
    let rest = &digits.as_bytes()[sig.min(digits.len())..];
    let first = rest.first().map_or(0, |b| b - b'0');
    let beyond = rest.iter().skip(1).any(|&b| b != b'0');
    let up = first > 5 || (first == 5 && (beyond || kept[sig - 1] % 2 == 1));
    if up {
        let mut i = sig;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                exp += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let s: String = kept.iter().map(|d| (b'0' + d) as char).collect();
    let body = if exp >= sig as i64 - 1 {
        format!("{s}{}", "0".repeat((exp - (sig as i64 - 1)) as usize))
    } else if exp >= 0 {
        format!("{}.{}", &s[..exp as usize + 1], &s[exp as usize + 1..])
    } else {
        format!("0.{}{s}", "0".repeat((-exp - 1) as usize))
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
