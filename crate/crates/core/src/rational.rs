//! Exact rational helpers on top of `num`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Parses `p/q`, `p`, `-p/q`. Whitespace around the token is ignored.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::MalformedRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let int = |tok: &str, signed: bool| -> Result<BigInt> {
        let digits = if signed { tok.strip_prefix(['-', '+']).unwrap_or(tok) } else { tok };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        tok.parse::<BigInt>().map_err(|_| bad())
    };
    let n = int(num, true)?;
    let d = match den {
        Some(d) => int(d, false)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// Reduced `p/q` form, or just `p` for integers.
pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// True when `v` is the square of a rational number.
pub fn is_rational_square(v: &Q) -> bool {
    !v.is_negative() && is_perfect_square(v.numer()) && is_perfect_square(v.denom())
}

/// Best rational approximations of `x` from its continued fraction, as
/// `(numerator, denominator)` pairs with denominators up to `max_den`.
pub fn convergents(x: f64, max_den: u64) -> Vec<(i64, u64)> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (1i64, x.floor() as i64);
    let (mut k0, mut k1) = (0u64, 1u64);
    let mut frac = x - x.floor();
    out.push((h1, k1));
    for _ in 0..64 {
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = a as i64;
        let h2 = a * h1 + h0;
        let k2 = a as u64 * k1 + k0;
        if k2 > max_den {
            break;
        }
        out.push((h2, k2));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    out
}
