//! The Gaussian rationals ℚ(i).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational numbers.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// An element `re + im·i` of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

pub type GR = GaussianRational;

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(rat_int(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::real(rat(n, d))
    }

    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    /// `n·i`.
    pub fn imag(im: Rational) -> Self {
        Self { re: Rational::zero(), im }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|², always a nonnegative rational.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "division by zero in Q(i)");
        Self { re: &self.re / &n, im: -&self.im / &n }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self { re: &self.re * q, im: &self.im * q }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: Rational::zero(), im: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self { re: Rational::one(), im: Rational::zero() }
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for GaussianRational {
    fn from(q: Rational) -> Self {
        Self::real(q)
    }
}

fn add_ref(a: &GR, b: &GR) -> GR {
    GR { re: &a.re + &b.re, im: &a.im + &b.im }
}

fn sub_ref(a: &GR, b: &GR) -> GR {
    GR { re: &a.re - &b.re, im: &a.im - &b.im }
}

fn mul_ref(a: &GR, b: &GR) -> GR {
    if a.im.is_zero() && b.im.is_zero() {
        return GR::real(&a.re * &b.re);
    }
    GR {
        re: &a.re * &b.re - &a.im * &b.im,
        im: &a.re * &b.im + &a.im * &b.re,
    }
}

fn div_ref(a: &GR, b: &GR) -> GR {
    if b.im.is_zero() {
        assert!(!b.re.is_zero(), "division by zero in Q(i)");
        return GR { re: &a.re / &b.re, im: &a.im / &b.re };
    }
    mul_ref(a, &b.inv())
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<GR> for GR {
            type Output = GR;
            fn $m(self, rhs: GR) -> GR {
                $f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a GR> for GR {
            type Output = GR;
            fn $m(self, rhs: &'a GR) -> GR {
                $f(&self, rhs)
            }
        }
        impl<'a> $tr<GR> for &'a GR {
            type Output = GR;
            fn $m(self, rhs: GR) -> GR {
                $f(self, &rhs)
            }
        }
        impl<'a, 'b> $tr<&'b GR> for &'a GR {
            type Output = GR;
            fn $m(self, rhs: &'b GR) -> GR {
                $f(self, rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);
binop!(Div, div, div_ref);

impl AddAssign<&GR> for GR {
    fn add_assign(&mut self, rhs: &GR) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<GR> for GR {
    fn add_assign(&mut self, rhs: GR) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign<&GR> for GR {
    fn sub_assign(&mut self, rhs: &GR) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GR> for GR {
    fn mul_assign(&mut self, rhs: &GR) {
        *self = mul_ref(self, rhs);
    }
}

impl Neg for GR {
    type Output = GR;
    fn neg(self) -> GR {
        GR { re: -self.re, im: -self.im }
    }
}

impl Neg for &GR {
    type Output = GR;
    fn neg(self) -> GR {
        GR { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let im_abs = self.im.abs();
        let im_txt = if im_abs.is_one() { "i".to_string() } else { format!("{}*i", im_abs) };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{}", im_txt)
            } else {
                write!(f, "{}", im_txt)
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", self.re, sign, im_txt)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Gaussian rational literal '{0}'")]
pub struct ParseGaussianError(pub String);

fn parse_rational(s: &str) -> Option<Rational> {
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let valid_int = |t: &str| {
        let t = t.strip_prefix(['+', '-']).unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num) {
        return None;
    }
    let n: BigInt = num.trim_start_matches('+').parse().ok()?;
    match den {
        None => Some(BigRational::from_integer(n)),
        Some(d) => {
            if !d.bytes().all(|b| b.is_ascii_digit()) || d.is_empty() {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
    }
}

/// Coefficient of an imaginary term: "" → 1, "+" → 1, "-" → −1, otherwise a rational.
fn parse_imag_coeff(s: &str) -> Option<Rational> {
    match s {
        "" | "+" => Some(Rational::one()),
        "-" => Some(-Rational::one()),
        _ => parse_rational(s),
    }
}

impl FromStr for GaussianRational {
    type Err = ParseGaussianError;

    /// Accepts `a/b`, `c/d*i`, `a/b+c/d*i`, `i`, `-i`, `2i`, with optional whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussianError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(&t).map(GR::real).ok_or_else(err);
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // The imaginary term starts at the last sign that is not leading.
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .last();
        let (re_txt, im_txt) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        if re_txt.contains('*') || im_txt[1.min(im_txt.len())..].contains(['+', '-']) {
            return Err(err());
        }
        let re = if re_txt.is_empty() { Rational::zero() } else { parse_rational(re_txt).ok_or_else(err)? };
        let im = parse_imag_coeff(im_txt).ok_or_else(err)?;
        Ok(GR { re, im })
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serializes a rational as its exact string form, for `serialize_with`.
pub fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GR {
        s.parse().unwrap()
    }

    #[test]
    fn parse_forms() {
        assert_eq!(g("1/2"), GR::from_frac(1, 2));
        assert_eq!(g("i"), GR::i());
        assert_eq!(g("-i"), -GR::i());
        assert_eq!(g("3/4-1/2*i"), GR::new(rat(3, 4), rat(-1, 2)));
        assert_eq!(g("-2+i"), GR::new(rat_int(-2), rat_int(1)));
        assert_eq!(g(" 2 i"), GR::imag(rat_int(2)));
        assert!("1//2".parse::<GR>().is_err());
        assert!("1/0".parse::<GR>().is_err());
        assert!("".parse::<GR>().is_err());
        assert!("1+2+3i".parse::<GR>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "5/3", "i", "-i", "2*i", "1/2-3/4*i", "-7+i"] {
            assert_eq!(g(s).to_string(), s);
            assert_eq!(g(&g(s).to_string()), g(s));
        }
    }

    #[test]
    fn field_ops() {
        let a = g("1/2+3*i");
        let b = g("-2/3+1/5*i");
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&a * &a.inv(), GR::one());
        assert_eq!(GR::i() * GR::i(), -GR::one());
        assert_eq!(GR::i_pow(-1), -GR::i());
        assert_eq!(a.conj().conj(), a);
    }
}
