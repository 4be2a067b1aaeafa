use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use super::real::BigReal;

/// Rectangular complex number over [`BigReal`].
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::new(BigReal::zero(prec), BigReal::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        BigComplex::new(BigReal::one(prec), BigReal::zero(prec))
    }

    pub fn i(prec: u32) -> Self {
        BigComplex::new(BigReal::zero(prec), BigReal::one(prec))
    }

    pub fn from_real(re: BigReal) -> Self {
        let prec = re.prec();
        BigComplex::new(re, BigReal::zero(prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex::new(BigReal::from_f64(re, prec), BigReal::from_f64(im, prec))
    }

    /// r·e^{iθ}
    pub fn from_polar(r: &BigReal, theta: &BigReal) -> Self {
        let prec = r.prec().max(theta.prec());
        let (s, c) = theta.with_prec(prec).as_float().clone().sin_cos(rug::Float::new(prec));
        BigComplex::new(r * BigReal::from_float(c), r * BigReal::from_float(s))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> BigReal {
        self.re.hypot(&self.im)
    }

    pub fn scale(&self, k: &BigReal) -> Self {
        BigComplex::new(&self.re * k, &self.im * k)
    }

    pub fn mul_u64(&self, k: u64) -> Self {
        BigComplex::new(self.re.mul_u64(k), self.im.mul_u64(k))
    }

    pub fn div_real(&self, k: &BigReal) -> Self {
        BigComplex::new(&self.re / k, &self.im / k)
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        BigComplex::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut acc = BigComplex::one(self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// exp(z) = e^{re}(cos im + i sin im)
    pub fn exp(&self) -> Self {
        BigComplex::from_polar(&self.re.exp(), &self.im)
    }

    /// Powers z^0, z^1, ..., z^n.
    pub fn powers(&self, n: usize) -> Vec<BigComplex> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(BigComplex::one(self.prec()));
        for k in 1..=n {
            let next = &out[k - 1] * self;
            out.push(next);
        }
        out
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        if self.im.is_zero() && rhs.im.is_zero() {
            let re = &self.re * &rhs.re;
            let prec = re.prec();
            return BigComplex::new(re, BigReal::zero(prec));
        }
        BigComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        self * &rhs.recip()
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &BigComplex) -> BigComplex {
                (&self).$method(rhs)
            }
        }
        impl $trait<BigComplex> for &BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&BigComplex> for BigComplex {
    fn add_assign(&mut self, rhs: &BigComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&BigComplex> for BigComplex {
    fn sub_assign(&mut self, rhs: &BigComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re, -self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_and_division_invert() {
        let a = BigComplex::from_f64(1.5, -2.0, 200);
        let b = BigComplex::from_f64(0.25, 3.0, 200);
        let back = &(&a * &b) / &b;
        assert!((&back - &a).abs().log2_abs() < -190.0);
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let z = BigComplex::new(BigReal::zero(256), BigReal::pi(256));
        let w = z.exp();
        assert!((&w.re + &BigReal::one(256)).abs().log2_abs() < -250.0);
        assert!(w.im.abs().log2_abs() < -250.0);
    }
}
