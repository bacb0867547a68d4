//! Exact complex arithmetic over rationals, decimal parsing/formatting, and
//! rational reconstruction.
//!
//! Field values are pairs of arbitrary-precision rationals. Arithmetic is
//! exact; the configured working precision governs only where irrational
//! constants are rounded in (square roots), how decimal strings are rendered,
//! and the smallest meaningful tolerance. Equality of values never uses `==`
//! in the pipeline — it always goes through an explicit absolute tolerance.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexValue {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexValue {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ComplexValue { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        ComplexValue { re, im: BigRational::zero() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// p/q as a real value. Panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn is_one_exact(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexValue { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ComplexValue { re: &self.re - &other.re, im: &self.im - &other.im }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ComplexValue {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn neg(&self) -> Self {
        ComplexValue { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn conj(&self) -> Self {
        ComplexValue { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Exact multiplicative inverse; `None` for exact zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.abs_sq();
        if n.is_zero() {
            return None;
        }
        Some(ComplexValue { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    /// |z|^2, exact. Modulus comparisons square the threshold instead of
    /// taking square roots.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Integer power; negative exponents invert first (`None` on zero base).
    pub fn pow(&self, exp: &BigInt) -> Option<Self> {
        if exp.is_zero() {
            return Some(Self::one());
        }
        let base = if exp.is_negative() { self.inv()? } else { self.clone() };
        let mut result = Self::one();
        let mut sq = base;
        let mut bits = exp.magnitude().clone();
        while !bits.is_zero() {
            if bits.is_odd() {
                result = result.mul(&sq);
            }
            bits >>= 1;
            if !bits.is_zero() {
                sq = sq.mul(&sq);
            }
        }
        Some(result)
    }

    /// |z| < tol, the zero-detection predicate.
    pub fn is_zero_within(&self, tol: &BigRational) -> bool {
        self.abs_sq() < tol * tol
    }

    /// |self - other| <= tol.
    pub fn approx_eq(&self, other: &Self, tol: &BigRational) -> bool {
        self.sub(other).abs_sq() <= tol * tol
    }

    /// |z| as a decimal rounded to `digits` significant digits (for display).
    pub fn abs_decimal(&self, digits: u32) -> String {
        format_decimal(&sqrt_rational(&self.abs_sq(), digits).expect("abs_sq is nonnegative"), digits)
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// Parses a decimal string (optional sign, optional fraction, optional
/// exponent, e.g. `-0.6180339887`, `1e-9`, `2/3`) into an exact rational.
/// A `p/q` form is accepted for exact rational input.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty numeric literal".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad_number(s))?;
        let q: BigInt = q.trim().parse().map_err(|_| bad_number(s))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(p, q));
    }

    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let e: i64 = e.parse().map_err(|_| bad_number(s))?;
            (m, e)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad_number(s));
    }
    let all: String = format!("{int_part}{frac_part}");
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad_number(s));
    }
    let numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad_number(s))? };
    let scale = frac_part.len() as i64;
    let value = BigRational::new(numer * BigInt::from(sign), BigInt::one());
    Ok(value * pow10(exp10 - scale))
}

fn bad_number(s: &str) -> Error {
    Error::Parse(format!("invalid numeric literal `{s}`"))
}

/// 10^e as an exact rational (e may be negative).
pub fn pow10(e: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Renders a rational as a decimal with `digits` significant digits.
/// Exact when the rational terminates within the budget; rounds half away
/// from zero otherwise.
pub fn format_decimal(x: &BigRational, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let ax = x.abs();

    // Decimal exponent k with 10^k <= ax < 10^(k+1).
    let mut k: i64 = 0;
    let one = BigRational::one();
    let ten = pow10(1);
    let mut t = ax.clone();
    while t >= ten {
        t = t / pow10(1);
        k += 1;
    }
    while t < one {
        t = t * pow10(1);
        k -= 1;
    }

    // Round ax * 10^(digits-1-k) to an integer of `digits` digits.
    let shift = digits as i64 - 1 - k;
    let scaled = ax * pow10(shift);
    let (mut n, rem) = scaled.numer().div_rem(scaled.denom());
    if &(rem * BigInt::from(2)) >= scaled.denom() {
        n += 1;
    }
    let mut mantissa = n.to_string();
    // Rounding may carry into one extra digit (e.g. 999.95 -> 1000).
    let mut k = k;
    if mantissa.len() as u32 > digits {
        mantissa.truncate(digits as usize);
        k += 1;
    }

    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if k >= 0 && (k as usize) < mantissa.len() {
        out.push_str(&mantissa[..=k as usize]);
        let frac = mantissa[k as usize + 1..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    } else if k < 0 && k >= -6 {
        out.push_str("0.");
        for _ in 0..(-k - 1) {
            out.push('0');
        }
        out.push_str(mantissa.trim_end_matches('0'));
    } else {
        let frac = mantissa[1..].trim_end_matches('0');
        out.push_str(&mantissa[..1]);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
        out.push('e');
        out.push_str(&k.to_string());
    }
    out
}

/// sqrt(x) rounded to roughly `digits` significant decimal digits.
/// `None` when x is negative.
pub fn sqrt_rational(x: &BigRational, digits: u32) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    // sqrt(p/q) = isqrt(p * q * 10^(2d)) / (q * 10^d), accurate to ~10^-d
    // relative error.
    let p = x.numer().magnitude();
    let q = x.denom().magnitude();
    let scale = BigUint::from(10u32).pow(digits);
    let scaled = p * q * &scale * &scale;
    let root = scaled.sqrt();
    Some(BigRational::new(BigInt::from(root), BigInt::from(q * scale)))
}

/// Best rational approximation with denominator at most `max_den`, by
/// walking the continued-fraction convergents (Stern–Brocot style, same
/// contract as Python's `Fraction.limit_denominator`).
pub fn limit_denominator(x: &BigRational, max_den: &BigInt) -> BigRational {
    assert!(*max_den >= BigInt::one(), "max_den must be at least 1");
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if q2 > *max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let r = n - a * &d;
        (n, d) = (d, r);
        if d.is_zero() {
            break;
        }
    }
    if d.is_zero() {
        return BigRational::new(p1, q1);
    }
    let k = (max_den - &q0).div_floor(&q1);
    let bound1 = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let bound2 = BigRational::new(p1, q1);
    if (x - &bound1).abs() <= (x - &bound2).abs() {
        bound1
    } else {
        bound2
    }
}
