//! Arbitrary-precision arithmetic and dense Hermitian kernels.
//!
//! Reals are MPFR floats (through `rug`); complex numbers are rectangular pairs.

mod complex;
mod factor;
mod gamma;
mod jacobi;
mod matrix;
mod quadrature;
mod real;
mod tridiag;

pub use complex::BigComplex;
pub use factor::{cholesky, default_zero_threshold, ldlt_inertia, whiten, whiten_with, CholeskyFactor, InertiaTriple};
pub use gamma::{
    factorial, ln_factorial, log2_factorial, lower_incomplete_gamma, lower_incomplete_gamma_ladder,
    regularized_gamma_p,
};
pub use jacobi::{hermitian_eigen, hermitian_eigenvalues, Eigen};
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use quadrature::{gauss_legendre, GaussLegendre};
pub use real::BigReal;

use serde::Serialize;

use crate::error::{Error, Result};

/// Working precision and eigensolver stopping rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrecisionContext {
    bits: u32,
    jacobi_threshold_exponent: i32,
    max_jacobi_sweeps: u32,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 128;

    /// Context with the default Jacobi threshold 2^{−bits+20} and 60 sweeps.
    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Config(format!("precision must be at least {} bits, got {bits}", Self::MIN_BITS)));
        }
        Ok(PrecisionContext { bits, jacobi_threshold_exponent: 20 - bits as i32, max_jacobi_sweeps: 60 })
    }

    /// Default policy for a job whose largest matrix has dimension `n`:
    /// max(192, ⌈4.5·n·ln n / ln 2⌉ + 64).
    pub fn for_dimension(n: usize) -> Self {
        Self::new(policy_bits(n)).expect("policy is above the minimum")
    }

    /// Tighten the stopping exponent; it may not be looser than −bits + 20.
    pub fn with_threshold_exponent(mut self, exponent: i32) -> Result<Self> {
        if exponent > 20 - self.bits as i32 {
            return Err(Error::Config(format!(
                "Jacobi threshold exponent {exponent} is looser than {}",
                20 - self.bits as i32
            )));
        }
        self.jacobi_threshold_exponent = exponent;
        Ok(self)
    }

    pub fn with_max_sweeps(mut self, sweeps: u32) -> Self {
        self.max_jacobi_sweeps = sweeps.max(1);
        self
    }

    /// Same settings at `factor`× the bits (threshold rescaled accordingly).
    pub fn scaled(&self, factor: u32) -> Self {
        let bits = self.bits * factor;
        let shift = self.jacobi_threshold_exponent - (20 - self.bits as i32);
        PrecisionContext { bits, jacobi_threshold_exponent: 20 - bits as i32 + shift, ..*self }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn jacobi_threshold_exponent(&self) -> i32 {
        self.jacobi_threshold_exponent
    }

    pub fn max_jacobi_sweeps(&self) -> u32 {
        self.max_jacobi_sweeps
    }

    /// 2^{−bits/k} at working precision.
    pub fn tolerance(&self, k: u32) -> BigReal {
        BigReal::pow2(-((self.bits / k) as i32), self.bits)
    }
}

pub fn policy_bits(n: usize) -> u32 {
    if n < 2 {
        return 192;
    }
    let nf = n as f64;
    let raw = (4.5 * nf * nf.ln() / std::f64::consts::LN_2).ceil() as u32 + 64;
    raw.max(192)
}
