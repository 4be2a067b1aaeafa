//! Outbedding pencils: the spectrum of A_n^+ = (G_+)^{-1}G_− on polynomials of
//! degree ≤ n, its counting functions and the asymptotic bookkeeping built
//! on them.
//!
//! Monomial Grams are nested, so the Cholesky factor of G_+(n) is the leading
//! block of the factor at n_max, and the whitened matrix for degree n is the
//! leading block of the whitened matrix at n_max. A [`Pencil`] whitens once
//! and then serves every degree up to its maximum.

mod profile;

use std::ops::RangeInclusive;

use serde::Serialize;

pub use profile::{
    delta_estimates, midrange_profile, norm_bound_check, CountingProfile, DeltaEstimates, NormBoundReport,
    NormBoundRow, ProfileVerdict, DEFAULT_MIDRANGE_SLACK,
};

use crate::bigarith::{cholesky, hermitian_eigenvalues, whiten_with, BigReal, HermitianMatrix, PrecisionContext};
use crate::error::{Error, Result};
use crate::moments::gram_matrix;
use crate::symbols::RegionSet;

/// Both whitened pencils of a region pair up to some maximal degree.
#[derive(Clone, Debug)]
pub struct Pencil {
    ctx: PrecisionContext,
    gram_bits: u32,
    /// L_+^{-1} G_− L_+^{-*}: eigenvalues of A^+.
    plus: HermitianMatrix,
    /// L_−^{-1} G_+ L_−^{-*}: eigenvalues of A^−.
    minus: HermitianMatrix,
}

impl Pencil {
    /// Grams and Cholesky run at 2× the working bits, escalating once to 4×.
    pub fn new(omega_plus: &RegionSet, omega_minus: &RegionSet, n_max: usize, ctx: &PrecisionContext) -> Result<Self> {
        let bits = ctx.bits();
        let mut last = None;
        for factor in [2, 4] {
            let gram_bits = bits * factor;
            let g_plus = gram_matrix(omega_plus, n_max, gram_bits)?.into_matrix();
            let g_minus = gram_matrix(omega_minus, n_max, gram_bits)?.into_matrix();
            match (cholesky(&g_plus), cholesky(&g_minus)) {
                (Ok(l_plus), Ok(l_minus)) => {
                    return Ok(Pencil {
                        ctx: *ctx,
                        gram_bits,
                        plus: whiten_with(&g_minus, &l_plus).with_prec(bits),
                        minus: whiten_with(&g_plus, &l_minus).with_prec(bits),
                    });
                }
                (Err(e), _) | (_, Err(e)) => last = Some(e),
            }
        }
        match last {
            Some(Error::NotPositiveDefinite { .. }) | None => Err(Error::IllConditioned { degree: n_max, bits: bits * 4 }),
            Some(other) => Err(other),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.plus.dim() - 1
    }

    pub fn gram_bits(&self) -> u32 {
        self.gram_bits
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// Spectrum of A_n^+, re-verified against the independently whitened A_n^−.
    pub fn spectrum(&self, n: usize) -> Result<PencilSpectrum> {
        if n > self.max_degree() {
            return Err(Error::Precondition(format!("degree {n} exceeds the pencil's maximum {}", self.max_degree())));
        }
        let plus = hermitian_eigenvalues(&self.plus.leading(n + 1), &self.ctx)?;
        let minus = hermitian_eigenvalues(&self.minus.leading(n + 1), &self.ctx)?;
        if let Some(bad) = plus.iter().chain(&minus).find(|v| !v.is_positive()) {
            return Err(Error::Consistency(format!(
                "outbedding eigenvalue {} at degree {n} is not positive",
                bad.to_decimal_digits(12)
            )));
        }
        // ascending λ^+ pairs with descending λ^−
        let gap = plus
            .iter()
            .zip(minus.iter().rev())
            .map(|(p, m)| distance_to_one(&(p * m)).log2_abs())
            .fold(f64::NEG_INFINITY, f64::max);
        let bound = -f64::from(self.ctx.bits() / 4);
        if gap > bound {
            return Err(Error::Consistency(format!(
                "A^+ and A^- spectra at degree {n} are not reciprocal: relative gap 2^{gap:.1}"
            )));
        }
        Ok(PencilSpectrum { degree: n, eigenvalues: plus, bits: self.ctx.bits(), gram_bits: self.gram_bits, reciprocal_gap_log2: gap })
    }
}

/// Eigenvalues of A_n^+ (ascending), with the precision that produced them.
#[derive(Clone, Debug)]
pub struct PencilSpectrum {
    pub degree: usize,
    pub eigenvalues: Vec<BigReal>,
    pub bits: u32,
    pub gram_bits: u32,
    /// log2 of max |λ_i^+·λ_{n−i}^− − 1| over the spectrum.
    pub reciprocal_gap_log2: f64,
}

/// Open interval (lo, hi) with hi possibly +∞.
#[derive(Clone, Debug)]
pub struct Interval {
    lo: BigReal,
    hi: Option<BigReal>,
}

impl Interval {
    pub fn new(lo: BigReal, hi: Option<BigReal>) -> Result<Self> {
        if lo.is_negative() {
            return Err(Error::Precondition(format!("interval start {} is negative", lo.to_f64())));
        }
        if let Some(h) = &hi {
            if *h <= lo {
                return Err(Error::Precondition(format!("empty interval ({}, {})", lo.to_f64(), h.to_f64())));
            }
        }
        Ok(Interval { lo, hi })
    }

    /// From doubles; `f64::INFINITY` as the upper end means unbounded.
    pub fn from_f64(lo: f64, hi: f64, prec: u32) -> Result<Self> {
        let hi = (hi.is_finite()).then(|| BigReal::from_f64(hi, prec));
        Interval::new(BigReal::from_f64(lo, prec), hi)
    }

    pub fn above(lo: BigReal) -> Result<Self> {
        Interval::new(lo, None)
    }

    pub fn lo(&self) -> &BigReal {
        &self.lo
    }

    pub fn hi(&self) -> Option<&BigReal> {
        self.hi.as_ref()
    }

    /// Image under λ ↦ 1/λ: (1/hi, 1/lo), with 1/0 = ∞.
    pub fn reciprocal(&self) -> Interval {
        let prec = self.lo.prec();
        let lo = self.hi.as_ref().map_or_else(|| BigReal::zero(prec), BigReal::recip);
        let hi = (!self.lo.is_zero()).then(|| self.lo.recip());
        Interval { lo, hi }
    }

    fn contains(&self, v: &BigReal) -> bool {
        *v > self.lo && self.hi.as_ref().is_none_or(|h| v < h)
    }

    fn near_end(&self, v: &BigReal, rel: &BigReal) -> bool {
        let near = |e: &BigReal| !e.is_zero() && (v - e).abs() <= (e * rel).abs();
        near(&self.lo) || self.hi.as_ref().is_some_and(near)
    }
}

/// Strict count with a flag for eigenvalues within 2^{−bits/3} (relative) of an end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Count {
    pub count: usize,
    pub boundary_warning: bool,
}

fn distance_to_one(v: &BigReal) -> BigReal {
    (v - &BigReal::one(v.prec())).abs()
}

fn count_in(values: &[BigReal], interval: &Interval, bits: u32) -> Count {
    let rel = BigReal::pow2(-((bits / 3) as i32), bits);
    Count {
        count: values.iter().filter(|v| interval.contains(v)).count(),
        boundary_warning: values.iter().any(|v| interval.near_end(v, &rel)),
    }
}

impl PencilSpectrum {
    /// Eigenvalues of A_n^− (ascending), as exact reciprocals of A_n^+.
    pub fn minus_eigenvalues(&self) -> Vec<BigReal> {
        self.eigenvalues.iter().rev().map(BigReal::recip).collect()
    }

    /// N(interval; A_n^+).
    pub fn count(&self, interval: &Interval) -> Count {
        count_in(&self.eigenvalues, interval, self.bits)
    }

    /// N(interval; A_n^−).
    pub fn count_minus(&self, interval: &Interval) -> Count {
        count_in(&self.minus_eigenvalues(), interval, self.bits)
    }

    /// Eigenvalues within 2^{−bits/3} relative of 1, tallied apart from (0,1) and (1,∞).
    pub fn near_unit(&self) -> usize {
        let rel = BigReal::pow2(-((self.bits / 3) as i32), self.bits);
        self.eigenvalues.iter().filter(|v| distance_to_one(v) <= rel).count()
    }

    /// N((0,1); A_n^+) excluding the near-unit tally.
    pub fn below_one(&self) -> usize {
        let rel = BigReal::pow2(-((self.bits / 3) as i32), self.bits);
        self.eigenvalues.iter().filter(|v| **v < 1.0f64 && distance_to_one(v) > rel).count()
    }

    /// N((1,∞); A_n^+) excluding the near-unit tally.
    pub fn above_one(&self) -> usize {
        self.eigenvalues.len() - self.below_one() - self.near_unit()
    }

    pub fn largest(&self) -> &BigReal {
        self.eigenvalues.last().expect("spectrum is nonempty")
    }
}

/// Spectrum of A_n^+ for a single degree.
pub fn outbedding_spectrum(
    omega_plus: &RegionSet,
    omega_minus: &RegionSet,
    n: usize,
    ctx: &PrecisionContext,
) -> Result<PencilSpectrum> {
    Pencil::new(omega_plus, omega_minus, n, ctx)?.spectrum(n)
}

/// Spectra for every degree in `degrees`, sharing one whitening.
pub fn outbedding_spectra(
    omega_plus: &RegionSet,
    omega_minus: &RegionSet,
    degrees: RangeInclusive<usize>,
    ctx: &PrecisionContext,
) -> Result<Vec<PencilSpectrum>> {
    let pencil = Pencil::new(omega_plus, omega_minus, *degrees.end(), ctx)?;
    degrees.map(|n| pencil.spectrum(n)).collect()
}

/// N(interval; A_n^+).
pub fn counting(spectrum: &PencilSpectrum, interval: &Interval) -> Count {
    spectrum.count(interval)
}
