use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Complex number with rational real and imaginary parts.
pub type GaussianRational = Complex<Rational>;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn gaussian(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

pub fn is_zero_gaussian(w: &GaussianRational) -> bool {
    w.re.is_zero() && w.im.is_zero()
}

/// `2^k` for any integer `k`.
pub fn pow2(k: i64) -> Rational {
    let p = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

pub fn sign(r: &Rational) -> Ordering {
    r.cmp(&Rational::zero())
}

/// Exact square root when `r` is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Canonical `p/q` text, e.g. `-3/4`, `5/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`. The sign lives on the numerator.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("malformed rational `{text}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    if den.starts_with('-') || den.starts_with('+') {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(n, d))
}

/// `a/b+c/di` form; a negative imaginary part is written `a/b-c/di`.
pub fn format_gaussian(w: &GaussianRational) -> String {
    let re = format_rational(&w.re);
    if w.im.is_negative() {
        format!("{re}-{}i", format_rational(&-w.im.clone()))
    } else {
        format!("{re}+{}i", format_rational(&w.im))
    }
}

/// Accepts `a/b+c/di`, `a/b-c/di`, a pure rational, or a pure imaginary
/// literal such as `1/2i` or `-i`.
pub fn parse_gaussian(text: &str) -> Result<GaussianRational> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(gaussian(parse_rational(&s)?, Rational::zero()));
    };
    let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
    let (re, im) = match split {
        Some(k) => (parse_rational(&body[..k])?, imaginary_part(&body[k..], text)?),
        None => (Rational::zero(), imaginary_part(body, text)?),
    };
    Ok(gaussian(re, im))
}

fn imaginary_part(part: &str, whole: &str) -> Result<Rational> {
    let part = part.strip_prefix('+').unwrap_or(part);
    match part {
        "" => Ok(Rational::one()),
        "-" => Ok(-Rational::one()),
        p => parse_rational(p).map_err(|_| Error::Parse(format!("malformed gaussian `{whole}`"))),
    }
}
