//! Scalars and the two arithmetic fields used throughout the crate.
//!
//! Parameters are held as [`Scalar`] values, either exact Gaussian rationals or
//! arbitrary-precision complex floats. Algorithms are written once against the
//! [`Field`] trait and run either in exact arithmetic ([`Exact`]) or in
//! MPFR-backed complex arithmetic at a fixed precision ([`BigFloat`]).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{HeunError, Result};

/// Default working precision (bits) for big-float computations.
pub const DEFAULT_PRECISION: u32 = 256;

/// Complex number with rational real and imaginary parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: impl Into<Rational>, im: impl Into<Rational>) -> Self {
        GaussRational { re: re.into(), im: im.into() }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        GaussRational { re: re.into(), im: Rational::new() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(n)
    }

    /// `num/den` as a real Gaussian rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(Rational::from((num, den)))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    pub fn conj(&self) -> Self {
        GaussRational { re: self.re.clone(), im: Rational::from(-&self.im) }
    }

    pub fn norm_sq(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    /// True when the value is a real integer.
    pub fn is_integer(&self) -> bool {
        self.is_real() && *self.re.denom() == 1
    }

    pub fn is_nonpositive_integer(&self) -> bool {
        self.is_integer() && self.re.cmp0().is_le()
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (&self.re, &self.im))
    }

    /// Lossy conversion for reporting.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        GaussRational::from_int(n)
    }
}

impl From<Rational> for GaussRational {
    fn from(r: Rational) -> Self {
        GaussRational::real(r)
    }
}

impl Add<&GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: Rational::from(&self.re + &rhs.re),
            im: Rational::from(&self.im + &rhs.im),
        }
    }
}

impl Sub<&GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: Rational::from(&self.re - &rhs.re),
            im: Rational::from(&self.im - &rhs.im),
        }
    }
}

impl Mul<&GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        if self.is_real() && rhs.is_real() {
            return GaussRational::real(Rational::from(&self.re * &rhs.re));
        }
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        GaussRational { re, im }
    }
}

impl Div<&GaussRational> for &GaussRational {
    type Output = GaussRational;
    /// Panics on division by zero.
    fn div(self, rhs: &GaussRational) -> GaussRational {
        if rhs.is_real() {
            return GaussRational {
                re: Rational::from(&self.re / &rhs.re),
                im: Rational::from(&self.im / &rhs.re),
            };
        }
        let n = rhs.norm_sq();
        let num = self * &rhs.conj();
        GaussRational { re: num.re / &n, im: num.im / &n }
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $m(self, rhs: GaussRational) -> GaussRational {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $m(self, rhs: &GaussRational) -> GaussRational {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        -&self
    }
}

fn fmt_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return f.write_str(&fmt_rational(&self.re));
        }
        let im_abs = Rational::from(self.im.abs_ref());
        let sign = if self.im.cmp0().is_lt() { '-' } else { '+' };
        if self.re.cmp0().is_eq() {
            let lead = if sign == '-' { "-" } else { "" };
            write!(f, "{lead}{}i", fmt_rational(&im_abs))
        } else {
            write!(f, "{}{sign}{}i", fmt_rational(&self.re), fmt_rational(&im_abs))
        }
    }
}

impl FromStr for GaussRational {
    type Err = HeunError;
    fn from_str(s: &str) -> Result<Self> {
        parse_gauss(s)
    }
}

/// Parses an exact real number: an integer, a fraction `p/q`, or a decimal with
/// optional exponent (`-0.01`, `.5`, `1e-3`). Decimals are converted exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || HeunError::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_rational(num)?;
        let den = parse_rational(den)?;
        if den.cmp0().is_eq() {
            return Err(HeunError::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(num / den);
    }
    let (sign, body) = match s.as_bytes()[0] {
        b'-' => (-1, &s[1..]),
        b'+' => (1, &s[1..]),
        _ => (1, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = body[pos + 1..].parse().map_err(|_| err())?;
            (&body[..pos], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let value = Integer::from_str_radix(&digits, 10).map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = Integer::from(10);
    let pow10 = |e: u32| Integer::from(Pow::pow(&ten, e));
    let mut r = Rational::from(value);
    if scale >= 0 {
        r *= pow10(scale as u32);
    } else {
        r /= pow10((-scale) as u32);
    }
    Ok(if sign < 0 { -r } else { r })
}

/// Parses the complex grammar `re`, `imi`, `re+imi`, `re-imi` where each part
/// follows [`parse_rational`]. A bare `i` / `-i` means unit imaginary part.
/// Examples: `1/2`, `2i`, `-i`, `-0.5+1/3i`, `1e-2-2i`.
pub fn parse_gauss(text: &str) -> Result<GaussRational> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(HeunError::Parse("empty number".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(GaussRational::real(parse_rational(&s)?));
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re_text, im_text) = match split {
        Some(p) => (&body[..p], &body[p..]),
        None => ("", body),
    };
    let im_text = im_text.strip_suffix('*').unwrap_or(im_text);
    let im = match im_text {
        "" | "+" => Rational::from(1),
        "-" => Rational::from(-1),
        t => parse_rational(t)?,
    };
    let re = if re_text.is_empty() { Rational::new() } else { parse_rational(re_text)? };
    Ok(GaussRational { re, im })
}

/// A parameter value: exact when possible, otherwise a big-float complex.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(GaussRational),
    Float(Complex),
}

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar::Exact(GaussRational::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(GaussRational::ratio(num, den))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussRational> {
        match self {
            Scalar::Exact(g) => Some(g),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        match self {
            Scalar::Exact(g) => g.to_complex(prec),
            Scalar::Float(c) => Complex::with_val(prec, c),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            Scalar::Exact(g) => g.to_f64_pair(),
            Scalar::Float(c) => (c.real().to_f64(), c.imag().to_f64()),
        }
    }

    fn precision(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(c) => Some(c.prec().0),
        }
    }

    fn binop(
        &self,
        rhs: &Scalar,
        exact: impl Fn(&GaussRational, &GaussRational) -> GaussRational,
        float: impl Fn(Complex, &Complex) -> Complex,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            _ => {
                let prec = self.precision().max(rhs.precision()).unwrap_or(DEFAULT_PRECISION);
                Scalar::Float(float(self.to_complex(prec), &rhs.to_complex(prec)))
            }
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a * b, |a, b| a * b)
    }

    /// Division; errors on an exactly zero divisor.
    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        if rhs.is_zero() {
            return Err(HeunError::InvalidParameter("division by zero".into()));
        }
        Ok(self.binop(rhs, |a, b| a / b, |a, b| a / b))
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(g) => Scalar::Exact(-g),
            Scalar::Float(c) => Scalar::Float(Complex::with_val(c.prec(), -c)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.is_zero(),
            Scalar::Float(c) => c.real().is_zero() && c.imag().is_zero(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.is_integer(),
            Scalar::Float(c) => c.imag().is_zero() && c.real().is_integer(),
        }
    }

    pub fn is_nonpositive_integer(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.is_nonpositive_integer(),
            Scalar::Float(c) => {
                c.imag().is_zero() && c.real().is_integer() && !c.real().is_sign_positive()
                    || c.real().is_zero() && c.imag().is_zero()
            }
        }
    }
}

impl From<GaussRational> for Scalar {
    fn from(g: GaussRational) -> Self {
        Scalar::Exact(g)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Complex> for Scalar {
    fn from(c: Complex) -> Self {
        Scalar::Float(c)
    }
}

impl FromStr for Scalar {
    type Err = HeunError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(Scalar::Exact(parse_gauss(s)?))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => g.fmt(f),
            Scalar::Float(c) => f.write_str(&format_complex(c, 20)),
        }
    }
}

/// Which arithmetic a computation ran in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldTag {
    Exact,
    BigFloat(u32),
}

/// Arithmetic context. Elements carry no context of their own; every
/// operation goes through the field so exact and big-float code paths share
/// one implementation.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn tag(&self) -> FieldTag;
    fn lift(&self, x: &Scalar) -> Result<Self::Elem>;
    fn lift_exact(&self, x: &GaussRational) -> Self::Elem;
    fn int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics (exact) or yields inf/nan (float) when `b` is zero; callers guard.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn to_complex(&self, a: &Self::Elem, prec: u32) -> Complex;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;

    fn zero(&self) -> Self::Elem {
        self.int(0)
    }

    fn one(&self) -> Self::Elem {
        self.int(1)
    }

    fn mul_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.int(n))
    }
}

/// Exact Gaussian-rational arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Exact;

impl Field for Exact {
    type Elem = GaussRational;

    fn tag(&self) -> FieldTag {
        FieldTag::Exact
    }

    fn lift(&self, x: &Scalar) -> Result<GaussRational> {
        match x {
            Scalar::Exact(g) => Ok(g.clone()),
            Scalar::Float(c) => Err(HeunError::NotExact(format!("got float {}", format_complex(c, 12)))),
        }
    }

    fn lift_exact(&self, x: &GaussRational) -> GaussRational {
        x.clone()
    }

    fn int(&self, n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    fn add(&self, a: &GaussRational, b: &GaussRational) -> GaussRational {
        a + b
    }

    fn sub(&self, a: &GaussRational, b: &GaussRational) -> GaussRational {
        a - b
    }

    fn mul(&self, a: &GaussRational, b: &GaussRational) -> GaussRational {
        a * b
    }

    fn div(&self, a: &GaussRational, b: &GaussRational) -> GaussRational {
        a / b
    }

    fn neg(&self, a: &GaussRational) -> GaussRational {
        -a
    }

    fn is_zero(&self, a: &GaussRational) -> bool {
        a.is_zero()
    }

    fn to_complex(&self, a: &GaussRational, prec: u32) -> Complex {
        a.to_complex(prec)
    }

    fn to_scalar(&self, a: &GaussRational) -> Scalar {
        Scalar::Exact(a.clone())
    }

    fn mul_int(&self, a: &GaussRational, n: i64) -> GaussRational {
        GaussRational { re: Rational::from(&a.re * n), im: Rational::from(&a.im * n) }
    }
}

/// MPFR complex arithmetic at a fixed precision in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BigFloat {
    pub prec: u32,
}

impl BigFloat {
    pub fn new(prec: u32) -> Self {
        BigFloat { prec }
    }
}

impl Default for BigFloat {
    fn default() -> Self {
        BigFloat { prec: DEFAULT_PRECISION }
    }
}

impl Field for BigFloat {
    type Elem = Complex;

    fn tag(&self) -> FieldTag {
        FieldTag::BigFloat(self.prec)
    }

    fn lift(&self, x: &Scalar) -> Result<Complex> {
        Ok(x.to_complex(self.prec))
    }

    fn lift_exact(&self, x: &GaussRational) -> Complex {
        x.to_complex(self.prec)
    }

    fn int(&self, n: i64) -> Complex {
        Complex::with_val(self.prec, n)
    }

    fn add(&self, a: &Complex, b: &Complex) -> Complex {
        Complex::with_val(self.prec, a + b)
    }

    fn sub(&self, a: &Complex, b: &Complex) -> Complex {
        Complex::with_val(self.prec, a - b)
    }

    fn mul(&self, a: &Complex, b: &Complex) -> Complex {
        Complex::with_val(self.prec, a * b)
    }

    fn div(&self, a: &Complex, b: &Complex) -> Complex {
        Complex::with_val(self.prec, a / b)
    }

    fn neg(&self, a: &Complex) -> Complex {
        Complex::with_val(self.prec, -a)
    }

    fn is_zero(&self, a: &Complex) -> bool {
        a.real().is_zero() && a.imag().is_zero()
    }

    fn to_complex(&self, a: &Complex, prec: u32) -> Complex {
        Complex::with_val(prec, a)
    }

    fn to_scalar(&self, a: &Complex) -> Scalar {
        Scalar::Float(a.clone())
    }

    fn mul_int(&self, a: &Complex, n: i64) -> Complex {
        Complex::with_val(self.prec, a * n)
    }
}

/// `|z|` as an `f64`; saturates rather than overflowing for huge values.
pub fn abs_f64(z: &Complex) -> f64 {
    Float::with_val(64, z.abs_ref()).to_f64()
}

/// `log2 |z|`, finite for every nonzero `z` regardless of exponent range.
pub fn log2_abs(z: &Complex) -> f64 {
    let a = Float::with_val(64, z.abs_ref());
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    Float::with_val(64, a.log2_ref()).to_f64()
}

/// Formats a real float with `digits` significant digits in plain notation.
pub fn format_real(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let v = x.to_f64();
    if !v.is_finite() || v.abs() >= 1e15 || v.abs() < 1e-6 {
        return x.to_string_radix(10, Some(digits));
    }
    let mag = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - mag).max(0) as usize;
    // Round through the big float so the last digit is correct beyond f64.
    let scaled = Float::with_val(x.prec().max(64), x * Float::with_val(64, 10u32).pow(decimals as u32))
        .round();
    let int = scaled.to_integer().unwrap_or_default();
    let neg = int.cmp0().is_lt();
    let mut text = Integer::from(int.abs_ref()).to_string();
    if decimals > 0 {
        if text.len() <= decimals {
            text = format!("{}{}", "0".repeat(decimals + 1 - text.len()), text);
        }
        text.insert(text.len() - decimals, '.');
    }
    if neg {
        format!("-{text}")
    } else {
        text
    }
}

/// Formats `re+imi` with `digits` significant digits per part; a zero
/// imaginary part is omitted.
pub fn format_complex(z: &Complex, digits: usize) -> String {
    let re = format_real(z.real(), digits);
    if z.imag().is_zero() {
        return re;
    }
    let im = format_real(z.imag(), digits);
    if z.real().is_zero() {
        return format!("{im}i");
    }
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}
