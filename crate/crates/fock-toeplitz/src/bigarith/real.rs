use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Arbitrary-precision real number. The mantissa width travels with the value;
/// binary operations round to the wider of the two operands.
#[derive(Clone, Debug)]
pub struct BigReal(Float);

impl BigReal {
    pub fn zero(prec: u32) -> Self {
        BigReal(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        BigReal(Float::with_val(prec, 1u32))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn from_float(v: Float) -> Self {
        BigReal(v)
    }

    /// 2^exp exactly.
    pub fn pow2(exp: i32, prec: u32) -> Self {
        BigReal(Float::with_val(prec, Float::u_exp(1, exp)))
    }

    pub fn pi(prec: u32) -> Self {
        BigReal(Float::with_val(prec, Constant::Pi))
    }

    /// Euler's number.
    pub fn e(prec: u32) -> Self {
        BigReal::one(prec).exp()
    }

    /// Parse a decimal string (`"-1.25e-3"`, `"7"`, ...) rounded once to `prec` bits.
    pub fn parse(text: &str, prec: u32) -> Result<Self> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| Error::Domain(format!("cannot parse {text:?} as a number: {e}")))?;
        let v = Float::with_val(prec, parsed);
        if !v.is_finite() {
            return Err(Error::Domain(format!("{text:?} is not finite")));
        }
        Ok(BigReal(v))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Copy rounded to a new precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        BigReal(Float::with_val(prec, &self.0))
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn as_float_mut(&mut self) -> &mut Float {
        &mut self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// log2|x| without leaving the exponent range of f64; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let exp = self.0.get_exp().unwrap_or(0);
        let mut mant = self.0.clone();
        mant.abs_mut();
        mant >>= exp;
        mant.to_f64().log2() + f64::from(exp)
    }

    /// Natural log of |x| as an f64 (finite for any nonzero value).
    pub fn ln_abs_f64(&self) -> f64 {
        self.log2_abs() * std::f64::consts::LN_2
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Less)
    }

    pub fn is_positive(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Greater)
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    pub fn abs(&self) -> Self {
        BigReal(Float::with_val(self.prec(), self.0.abs_ref()))
    }

    pub fn sqrt(&self) -> Self {
        BigReal(Float::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn exp(&self) -> Self {
        BigReal(Float::with_val(self.prec(), self.0.exp_ref()))
    }

    pub fn ln(&self) -> Self {
        BigReal(Float::with_val(self.prec(), self.0.ln_ref()))
    }

    pub fn recip(&self) -> Self {
        BigReal(Float::with_val(self.prec(), self.0.recip_ref()))
    }

    pub fn square(&self) -> Self {
        BigReal(Float::with_val(self.prec(), self.0.square_ref()))
    }

    pub fn powu(&self, n: u32) -> Self {
        BigReal(Float::with_val(self.prec(), (&self.0).pow(n)))
    }

    pub fn powi(&self, n: i32) -> Self {
        BigReal(Float::with_val(self.prec(), (&self.0).pow(n)))
    }

    /// x^y for real y (x > 0).
    pub fn powf(&self, y: &BigReal) -> Self {
        let prec = self.prec().max(y.prec());
        BigReal(Float::with_val(prec, (&self.0).pow(&y.0)))
    }

    pub fn mul_u64(&self, k: u64) -> Self {
        BigReal(Float::with_val(self.prec(), &self.0 * k))
    }

    pub fn div_u64(&self, k: u64) -> Self {
        BigReal(Float::with_val(self.prec(), &self.0 / k))
    }

    pub fn mul_f64(&self, k: f64) -> Self {
        BigReal(Float::with_val(self.prec(), &self.0 * k))
    }

    /// Multiply by 2^k exactly.
    pub fn mul_pow2(&self, k: i32) -> Self {
        let mut v = self.0.clone();
        v <<= k;
        BigReal(v)
    }

    pub fn hypot(&self, other: &BigReal) -> Self {
        let prec = self.prec().max(other.prec());
        BigReal(Float::with_val(prec, self.0.hypot_ref(&other.0)))
    }

    pub fn max(&self, other: &BigReal) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn min(&self, other: &BigReal) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Total order (values here are never NaN; NaN would sort last).
    pub fn total_cmp(&self, other: &BigReal) -> Ordering {
        self.0.total_cmp(&other.0)
    }

    /// |a - b| / max(|a|, |b|, floor).
    pub fn rel_diff(&self, other: &BigReal, floor: &BigReal) -> BigReal {
        let scale = self.abs().max(&other.abs()).max(floor);
        if scale.is_zero() {
            return BigReal::zero(self.prec());
        }
        (self - other).abs() / scale
    }

    /// Decimal digits needed to round-trip the mantissa.
    pub fn decimal_digits(&self) -> usize {
        (f64::from(self.prec()) * std::f64::consts::LOG10_2).ceil() as usize + 1
    }

    /// Full-precision decimal string, e.g. `6.3212055882855767840447622983853913e-1`.
    pub fn to_decimal_string(&self) -> String {
        self.0.to_string_radix(10, Some(self.decimal_digits()))
    }

    /// Decimal string with a fixed number of significant digits.
    pub fn to_decimal_digits(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits.max(1)))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for BigReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for BigReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(d) => write!(f, "{}", self.to_decimal_digits(d)),
            None => write!(f, "{}", self.to_decimal_string()),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let prec = self.prec().max(rhs.prec());
                BigReal(Float::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl $trait<BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self $op &rhs
            }
        }
        impl $trait<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                &self $op rhs
            }
        }
        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                &self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

macro_rules! assignop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&BigReal> for BigReal {
            fn $method(&mut self, rhs: &BigReal) {
                if rhs.prec() > self.prec() {
                    self.0.set_prec(rhs.prec());
                }
                self.0 $op &rhs.0;
            }
        }
        impl $trait<BigReal> for BigReal {
            fn $method(&mut self, rhs: BigReal) {
                *self $op &rhs;
            }
        }
    };
}

assignop!(AddAssign, add_assign, +=);
assignop!(SubAssign, sub_assign, -=);
assignop!(MulAssign, mul_assign, *=);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(Float::with_val(self.prec(), -&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_precision_promotes() {
        let a = BigReal::one(128);
        let b = BigReal::from_f64(0.5, 256);
        assert_eq!((&a + &b).prec(), 256);
        assert_eq!((&b * &a).prec(), 256);
    }

    #[test]
    fn parse_is_exact_at_precision() {
        let x = BigReal::parse("0.1", 300).unwrap();
        let ten = BigReal::from_u64(10, 300);
        let err = (&x * &ten - BigReal::one(300)).abs();
        assert!(err.log2_abs() < -295.0);
        assert!(BigReal::parse("abc", 64).is_err());
    }

    #[test]
    fn log2_abs_survives_tiny_values() {
        let x = BigReal::pow2(-5000, 128).mul_f64(3.0);
        assert!((x.log2_abs() - (-5000.0 + 3f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn decimal_string_round_trips() {
        let x = BigReal::pi(200);
        let y = BigReal::parse(&x.to_decimal_string(), 200).unwrap();
        assert_eq!(x, y);
    }
}
