//! Multiprecision scalars: working precision, a complex type built on MPFR
//! floats, and the [`Scalar`] trait that lets series code run over exact
//! rationals, real floats and complex floats alike.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Smallest precision any computation context may use.
pub const MIN_DIGITS: u32 = 30;

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;

/// Decimal working precision attached to a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub fn digits(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Precision { digits, min: MIN_DIGITS });
        }
        Ok(Precision { digits })
    }

    /// Default guard rule for order-`order` mapping work: `max(64, 4 K)` digits.
    pub fn for_order(order: usize) -> Self {
        Precision { digits: (4 * order as u32).max(64) }
    }

    pub fn decimal_digits(self) -> u32 {
        self.digits
    }

    /// Mantissa bits, with a small guard.
    pub fn bits(self) -> u32 {
        (self.digits as f64 * BITS_PER_DIGIT).ceil() as u32 + 16
    }

    pub fn max(self, other: Precision) -> Precision {
        if self.digits >= other.digits {
            self
        } else {
            other
        }
    }

    pub fn zero(self) -> Float {
        Float::new(self.bits())
    }

    pub fn int(self, v: i64) -> Float {
        Float::with_val(self.bits(), v)
    }

    pub fn f64(self, v: f64) -> Float {
        Float::with_val(self.bits(), v)
    }

    pub fn ratio(self, num: i64, den: i64) -> Float {
        Float::with_val(self.bits(), Rational::from((num, den)))
    }

    pub fn rational(self, r: &Rational) -> Float {
        Float::with_val(self.bits(), r)
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    /// Parses a decimal literal; blanks inside the digit string are ignored
    /// so values can be written in grouped form.
    pub fn parse(self, text: &str) -> Result<Float> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let parsed = Float::parse(&cleaned).map_err(|e| Error::Parse(format!("{cleaned}: {e}")))?;
        Ok(Float::with_val(self.bits(), parsed))
    }

    /// Values below this magnitude relative to unity are treated as noise.
    pub fn floor(self) -> Float {
        let p = self.int(10);
        p.pow(-(self.digits as i32))
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.digits)
    }
}

/// Precision in bits of a float, promoted to at least `bits`.
fn with_prec(x: &Float, bits: u32) -> Float {
    Float::with_val(bits.max(x.prec()), x)
}

/// Formats a float in plain scientific notation with `digits` significant digits.
pub fn fmt_real(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

/// Complex number with MPFR real and imaginary parts.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let bits = re.prec().max(im.prec());
        BigComplex { re: with_prec(&re, bits), im: with_prec(&im, bits) }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        BigComplex { re, im }
    }

    pub fn zero(prec: Precision) -> Self {
        BigComplex { re: prec.zero(), im: prec.zero() }
    }

    pub fn one(prec: Precision) -> Self {
        BigComplex { re: prec.int(1), im: prec.zero() }
    }

    /// `r · e^{iθ}`.
    pub fn from_polar(r: &Float, theta: &Float) -> Self {
        let bits = r.prec().max(theta.prec());
        let (s, c) = Float::with_val(bits, theta).sin_cos(Float::new(bits));
        BigComplex { re: Float::with_val(bits, r * &c), im: Float::with_val(bits, r * &s) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn add(&self, o: &Self) -> Self {
        let b = self.prec().max(o.prec());
        BigComplex { re: Float::with_val(b, &self.re + &o.re), im: Float::with_val(b, &self.im + &o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let b = self.prec().max(o.prec());
        BigComplex { re: Float::with_val(b, &self.re - &o.re), im: Float::with_val(b, &self.im - &o.im) }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let b = self.prec().max(o.prec());
        let rr = Float::with_val(b, &self.re * &o.re);
        let ii = Float::with_val(b, &self.im * &o.im);
        let ri = Float::with_val(b, &self.re * &o.im);
        let ir = Float::with_val(b, &self.im * &o.re);
        BigComplex { re: rr - ii, im: ri + ir }
    }

    pub fn scale(&self, s: &Float) -> Self {
        let b = self.prec().max(s.prec());
        BigComplex { re: Float::with_val(b, &self.re * s), im: Float::with_val(b, &self.im * s) }
    }

    pub fn norm_sqr(&self) -> Float {
        let b = self.prec();
        Float::with_val(b, self.re.square_ref()) + Float::with_val(b, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        let b = self.prec();
        BigComplex { re: Float::with_val(b, &self.re / &d), im: Float::with_val(b, -&self.im) / &d }
    }

    pub fn div(&self, o: &Self) -> Self {
        // Smith-style scaling is unnecessary with MPFR's exponent range.
        let d = o.norm_sqr();
        let b = self.prec().max(o.prec());
        let re = Float::with_val(b, &self.re * &o.re) + Float::with_val(b, &self.im * &o.im);
        let im = Float::with_val(b, &self.im * &o.re) - Float::with_val(b, &self.re * &o.im);
        BigComplex { re: re / &d, im: im / &d }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let b = self.prec();
        BigComplex { re: Float::with_val(b, self.abs().ln()), im: self.arg() }
    }

    pub fn exp(&self) -> Self {
        let r = Float::with_val(self.prec(), self.re.exp_ref());
        BigComplex::from_polar(&r, &self.im)
    }

    /// Principal power `self^e` for a real exponent.
    pub fn powf(&self, e: &Float) -> Self {
        if self.is_zero() {
            return BigComplex::zero_bits(self.prec());
        }
        let b = self.prec().max(e.prec());
        let r = Float::with_val(b, self.abs().ln() * e).exp();
        let theta = Float::with_val(b, self.arg() * e);
        BigComplex::from_polar(&r, &theta)
    }

    /// Principal square root (branch cut on the negative real axis,
    /// imaginary part of the result `>= 0` on it).
    pub fn sqrt(&self) -> Self {
        let b = self.prec();
        if self.is_zero() {
            return BigComplex::zero_bits(b);
        }
        let m = self.abs();
        let half_re_plus = Float::with_val(b, &m + &self.re) / 2u32;
        let half_re_minus = Float::with_val(b, &m - &self.re) / 2u32;
        let re = half_re_plus.sqrt();
        let mut im = half_re_minus.sqrt();
        if self.im.is_sign_negative() && !self.im.is_zero() {
            im = -im;
        }
        BigComplex { re, im }
    }

    pub fn pow_int(&self, n: u32) -> Self {
        let mut acc = BigComplex::one_bits(self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn zero_bits(bits: u32) -> Self {
        BigComplex { re: Float::new(bits), im: Float::new(bits) }
    }

    pub fn one_bits(bits: u32) -> Self {
        BigComplex { re: Float::with_val(bits, 1), im: Float::new(bits) }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(20);
        write!(f, "{} {} {}i", fmt_real(&self.re, d), if self.im.is_sign_negative() { "-" } else { "+" }, fmt_real(&Float::with_val(self.im.prec(), self.im.abs_ref()), d))
    }
}

/// Coefficient domain for power series and polynomials.
///
/// Constructors take `&self` as a template so that float precision is carried
/// over from the operands rather than from global state.
pub trait Scalar: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;

    fn from_int_like(&self, v: i64) -> Self {
        self.from_rational_like(&Rational::from(v))
    }
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn one_like(&self) -> Self {
        Rational::from(1)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == Ordering::Equal
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn div(&self, o: &Self) -> Self {
        Rational::from(self / o)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
}

impl Scalar for Float {
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn one_like(&self) -> Self {
        Float::with_val(self.prec(), 1)
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        Float::with_val(self.prec(), r)
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Float::with_val(self.prec().max(o.prec()), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Float::with_val(self.prec().max(o.prec()), self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Float::with_val(self.prec().max(o.prec()), self * o)
    }
    fn div(&self, o: &Self) -> Self {
        Float::with_val(self.prec().max(o.prec()), self / o)
    }
    fn neg(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
}

impl Scalar for BigComplex {
    fn zero_like(&self) -> Self {
        BigComplex::zero_bits(self.prec())
    }
    fn one_like(&self) -> Self {
        BigComplex::one_bits(self.prec())
    }
    fn from_rational_like(&self, r: &Rational) -> Self {
        BigComplex::from_real(Float::with_val(self.prec(), r))
    }
    fn is_zero(&self) -> bool {
        BigComplex::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        BigComplex::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        BigComplex::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        BigComplex::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        BigComplex::div(self, o)
    }
    fn neg(&self) -> Self {
        BigComplex::neg(self)
    }
}

/// Exact `n!` as an integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}
