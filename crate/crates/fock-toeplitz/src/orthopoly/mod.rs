//! Orthonormal polynomials for area measure on a disc region and their
//! n-th root growth off the region.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::bigarith::{cholesky, BigComplex, BigReal, ComplexMatrix, PrecisionContext};
use crate::error::{Error, Result};
use crate::moments::gram_matrix;
use crate::symbols::{green_disc_complement, RegionSet};

/// P_0, …, P_n as monomial coefficient columns: P_k = Σ_{j≤k} coeff(j,k)·z^j.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    region: RegionSet,
    coefficients: ComplexMatrix,
    /// log2 of ‖C^H G C − I‖_F.
    pub residual_log2: f64,
    pub bits: u32,
}

impl OrthoBasis {
    pub fn region(&self) -> &RegionSet {
        &self.region
    }

    pub fn degree(&self) -> usize {
        self.coefficients.cols() - 1
    }

    /// Coefficient of z^j in P_k (zero for j > k).
    pub fn coefficient(&self, j: usize, k: usize) -> &BigComplex {
        self.coefficients.get(j, k)
    }

    /// P_k(z) by Horner.
    pub fn evaluate(&self, k: usize, z: &BigComplex) -> BigComplex {
        let z = z.with_prec(self.coefficients.get(0, 0).prec());
        (0..=k).rev().fold(BigComplex::zero(z.prec()), |acc, j| &(&acc * &z) + self.coefficients.get(j, k))
    }
}

/// Orthonormal basis from C = L^{-*}, G = L·L*. Cholesky runs at 2× bits,
/// then 4×, before giving up as ill-conditioned.
pub fn orthonormal_basis(region: &RegionSet, n: usize, ctx: &PrecisionContext) -> Result<OrthoBasis> {
    let bits = ctx.bits();
    for factor in [2, 4] {
        let prec = bits * factor;
        let gram = gram_matrix(region, n, prec)?.into_matrix();
        let Ok(factor) = cholesky(&gram) else { continue };
        let coefficients = factor.inverse().adjoint();
        let check = gram.to_dense().matmul(&coefficients);
        let product = coefficients.adjoint().matmul(&check);
        let residual = product.distance(&ComplexMatrix::identity(n + 1, prec)).log2_abs();
        if residual > -f64::from(bits / 4) {
            return Err(Error::Consistency(format!("orthonormality residual 2^{residual:.1} at degree {n}")));
        }
        return Ok(OrthoBasis { region: region.clone(), coefficients, residual_log2: residual, bits });
    }
    Err(Error::IllConditioned { degree: n, bits: bits * 4 })
}

#[derive(Clone, Debug, Serialize)]
pub struct NthRootRow {
    pub degree: usize,
    pub value: f64,
}

/// |P_k(z)|^{1/k} over a range of k, with the Green target e^{g(z)}.
#[derive(Clone, Debug, Serialize)]
pub struct NthRootProfile {
    pub rows: Vec<NthRootRow>,
    /// e^{g(z)} for the region's single outer disc, or for an enclosing disc.
    pub target: Option<f64>,
    /// The target came from an enclosing disc rather than the region itself.
    pub approximate: bool,
    /// z lies in the convex hull; only the upper bound applies there.
    pub inside_hull: bool,
}

pub fn nth_root_profile(basis: &OrthoBasis, z: &BigComplex, degrees: RangeInclusive<usize>) -> Result<NthRootProfile> {
    if *degrees.start() == 0 || *degrees.end() > basis.degree() {
        return Err(Error::Precondition(format!("degrees must lie in [1, {}]", basis.degree())));
    }
    let prec = basis.bits;
    let rows = degrees
        .map(|k| {
            let value = basis.evaluate(k, z).abs();
            let root = (value.ln() / BigReal::from_u64(k as u64, prec)).exp();
            NthRootRow { degree: k, value: root.to_f64() }
        })
        .collect();
    let outer = basis.region.outer_discs();
    let (disc, approximate) = match outer.as_slice() {
        [only] => (Some(only.clone()), false),
        _ => (basis.region.enclosing_disc(), true),
    };
    let target = match disc {
        Some(d) => match green_disc_complement(&d, &z.with_prec(prec)) {
            Ok(g) => Some(g.exp().to_f64()),
            Err(_) => Some(1.0),
        },
        None => None,
    };
    Ok(NthRootProfile { rows, target, approximate, inside_hull: basis.region.hull_contains(&z.with_prec(prec)) })
}
