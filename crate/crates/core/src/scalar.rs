//! Scalar backends: exact rationals and a rounded high-precision decimal.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicI64, AtomicU64, Ordering};

use bigdecimal::{BigDecimal, Context, ToPrimitive};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

/// Exact rational scalar.
pub type Q = BigRational;
/// Complex scalar over a real backend.
pub type C<S> = Complex<S>;

/// Minimal field interface used by the linear algebra routines.
pub trait Field:
    Clone
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Size estimate for pivot selection (partial pivoting on the float backend).
    fn magnitude(&self) -> f64;
}

/// A real scalar backend.
pub trait Scalar: Field + Num + PartialOrd + fmt::Display {
    /// True when arithmetic performs no rounding.
    const EXACT: bool;
    /// Short backend name used in reports.
    const NAME: &'static str;

    fn from_rational(q: &Q) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_rational(&Q::from_integer(BigInt::from(n)))
    }
    fn frac(p: i64, q: i64) -> Self {
        Self::from_rational(&Q::new(BigInt::from(p), BigInt::from(q)))
    }
    /// Square root; `None` for negative input or, on the exact backend, a non-square.
    fn sqrt(&self) -> Option<Self>;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Parse "p/q", an integer or (float backend only) a decimal literal.
    fn parse(text: &str) -> Result<Self, String>;
    /// Canonical text used in JSON and CLI output.
    fn to_plain_string(&self) -> String {
        self.to_string()
    }
    fn is_positive(&self) -> bool {
        !self.is_zero() && *self > Self::zero()
    }
    fn is_negative(&self) -> bool {
        !self.is_zero() && *self < Self::zero()
    }
    fn half() -> Self {
        Self::frac(1, 2)
    }
}

impl Field for Q {
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

impl Scalar for Q {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn from_rational(q: &Q) -> Self {
        q.clone()
    }

    fn sqrt(&self) -> Option<Self> {
        if num_traits::Signed::is_negative(self) {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &n * &n == *self.numer() && &d * &d == *self.denom() {
            Some(Q::new(n, d))
        } else {
            None
        }
    }

    fn abs(&self) -> Self {
        num_traits::Signed::abs(self)
    }

    fn to_f64(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }

    fn parse(text: &str) -> Result<Self, String> {
        parse_rational(text)
    }
}

/// Parse "p/q" or an integer (optionally signed) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Q, String> {
    let t = text.trim();
    let bad = || format!("invalid rational literal {t:?}");
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(format!("zero denominator in {t:?}"));
        }
        Ok(Q::new(p, q))
    } else {
        BigInt::from_str(t).map(Q::from_integer).map_err(|_| bad())
    }
}

static FLOAT_DIGITS: AtomicU64 = AtomicU64::new(64);
static FLOAT_EPS_EXP: AtomicI64 = AtomicI64::new(-25);

/// Process-wide configuration of the float backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FloatConfig {
    /// Significant decimal digits kept after every operation (50..=96).
    pub digits: u64,
    /// Values with absolute value below 10^eps_exponent count as zero.
    pub eps_exponent: i64,
}

impl FloatConfig {
    pub fn current() -> Self {
        FloatConfig {
            digits: FLOAT_DIGITS.load(Ordering::Relaxed),
            eps_exponent: FLOAT_EPS_EXP.load(Ordering::Relaxed),
        }
    }

    /// Install this configuration; digits are clamped to 50..=96.
    pub fn install(self) {
        FLOAT_DIGITS.store(self.digits.clamp(50, 96), Ordering::Relaxed);
        FLOAT_EPS_EXP.store(self.eps_exponent, Ordering::Relaxed);
    }
}

impl Default for FloatConfig {
    fn default() -> Self {
        FloatConfig { digits: 64, eps_exponent: -25 }
    }
}

/// High-precision decimal rounded to `FloatConfig::digits` significant digits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Real(BigDecimal);

impl Real {
    fn rounded(x: BigDecimal) -> Self {
        let digits = FLOAT_DIGITS.load(Ordering::Relaxed);
        if x.digits() > digits {
            Real(x.with_prec(digits))
        } else {
            Real(x)
        }
    }

    pub fn epsilon() -> Real {
        Real(BigDecimal::new(BigInt::one(), -FLOAT_EPS_EXP.load(Ordering::Relaxed)))
    }

    pub fn inner(&self) -> &BigDecimal {
        &self.0
    }

    /// Relative difference |a−b| / max(|a|,|b|), as a float backend value.
    pub fn relative_difference(&self, other: &Real) -> Real {
        let diff = Real(&self.0 - &other.0).0.abs();
        let scale = std::cmp::max(self.0.abs(), other.0.abs());
        if scale.is_zero() {
            return Real(BigDecimal::zero());
        }
        Real::rounded(diff / scale)
    }
}

impl From<BigDecimal> for Real {
    fn from(x: BigDecimal) -> Self {
        Real::rounded(x)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.0.with_prec(30).normalized())
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                Real::rounded(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Real> for &'a Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                Real::rounded(&self.0 $op &rhs.0)
            }
        }
    };
}
real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);
real_binop!(Rem, rem, %);

impl Div for Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        Real::rounded(self.0 / rhs.0)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Zero for Real {
    fn zero() -> Self {
        Real(BigDecimal::zero())
    }
    /// Zero up to the configured threshold ε.
    fn is_zero(&self) -> bool {
        self.0.is_zero() || self.0.abs() < Real::epsilon().0
    }
}

impl One for Real {
    fn one() -> Self {
        Real(BigDecimal::one())
    }
}

impl Num for Real {
    type FromStrRadixErr = String;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err("only radix 10 is supported".into());
        }
        <Real as Scalar>::parse(s)
    }
}

impl Field for Real {
    fn magnitude(&self) -> f64 {
        self.0.abs().to_f64().unwrap_or(f64::MAX)
    }
}

impl Scalar for Real {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn from_rational(q: &Q) -> Self {
        let n = BigDecimal::from(q.numer().clone());
        let d = BigDecimal::from(q.denom().clone());
        Real::rounded(n / d)
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Real::zero());
        }
        if self.0 < BigDecimal::zero() {
            return None;
        }
        let ctx = Context::default().with_prec(FLOAT_DIGITS.load(Ordering::Relaxed) + 8)?;
        self.0.sqrt_with_context(&ctx).map(Real::rounded)
    }

    fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    fn parse(text: &str) -> Result<Self, String> {
        let t = text.trim();
        if t.contains('/') {
            return parse_rational(t).map(|q| Real::from_rational(&q));
        }
        BigDecimal::from_str(t)
            .map(Real::rounded)
            .map_err(|_| format!("invalid decimal literal {t:?}"))
    }

    fn to_plain_string(&self) -> String {
        if self.is_zero() {
            "0".into()
        } else {
            self.0.normalized().to_string()
        }
    }
}

impl<S: Scalar> Field for Complex<S> {
    fn magnitude(&self) -> f64 {
        self.re.magnitude() + self.im.magnitude()
    }
}

/// Complex number with real part only.
pub fn re<S: Scalar>(x: S) -> C<S> {
    Complex::new(x, S::zero())
}

/// The imaginary unit.
pub fn imag_unit<S: Scalar>() -> C<S> {
    Complex::new(S::zero(), S::one())
}

/// Text form of a complex scalar: "3/2", "-i", "1+2i".
pub fn complex_to_string<S: Scalar>(z: &C<S>) -> String {
    let (r, i) = (&z.re, &z.im);
    if i.is_zero() {
        return r.to_plain_string();
    }
    let im = if i.is_one() {
        "i".to_string()
    } else if (-i.clone()).is_one() {
        "-i".to_string()
    } else {
        format!("{}i", i.to_plain_string())
    };
    if r.is_zero() {
        im
    } else if im.starts_with('-') {
        format!("{}{}", r.to_plain_string(), im)
    } else {
        format!("{}+{}", r.to_plain_string(), im)
    }
}

/// Convert an exact complex value into another backend.
pub fn complex_from_q<S: Scalar>(z: &C<Q>) -> C<S> {
    Complex::new(S::from_rational(&z.re), S::from_rational(&z.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_only_for_squares() {
        assert_eq!(Q::frac(9, 4).sqrt(), Some(Q::frac(3, 2)));
        assert_eq!(Q::from_int(2).sqrt(), None);
        assert_eq!(Q::from_int(-4).sqrt(), None);
    }

    #[test]
    fn parse_literals() {
        assert_eq!(parse_rational("3/2").unwrap(), Q::frac(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), Q::from_int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let r = Real::parse("0.25").unwrap();
        assert!((r - Real::frac(1, 4)).is_zero());
    }

    #[test]
    fn float_sqrt_has_many_digits() {
        let two = Real::from_int(2);
        let r = two.sqrt().unwrap();
        let err = (r.clone() * r - Real::from_int(2)).abs();
        assert!(err.inner() < &BigDecimal::from_str("1e-55").unwrap());
    }

    #[test]
    fn float_zero_threshold() {
        let tiny = Real::parse("1e-30").unwrap();
        assert!(tiny.is_zero());
        assert!(!Real::parse("1e-20").unwrap().is_zero());
    }

    #[test]
    fn complex_text() {
        let z = Complex::new(Q::one(), Q::from_int(-2));
        assert_eq!(complex_to_string(&z), "1-2i");
        assert_eq!(complex_to_string(&imag_unit::<Q>()), "i");
    }
}
