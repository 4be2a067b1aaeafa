//! Inner-product matrices in the monomial basis: Lebesgue Grams over disc
//! regions, weighted moment matrices of a symbol, and the normalized Fock
//! truncation of a Toeplitz operator.
//!
//! Every matrix here uses the quadratic-form convention M_{jk} = ⟨z^k, z^j⟩,
//! so that c^H M c is the weighted norm of Σ c_k z^k.

mod binomial;
mod fock;
mod lebesgue;
mod quadrature;

use std::fmt;

use rug::Rational;

pub use fock::{fock_block, fock_moment, fock_norm_sq, FockBlock, GATE_BITS};
pub use lebesgue::lebesgue_moment;
pub use quadrature::polar_nodes;

use crate::bigarith::{BigComplex, BigReal, HermitianMatrix};
use crate::error::{Error, Result};
use crate::symbols::{RegionSet, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentKind {
    LebesgueGram,
    WeightedLebesgue,
    WeightedGaussian,
    FockToeplitz,
}

impl fmt::Display for MomentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MomentKind::LebesgueGram => "lebesgue-gram",
            MomentKind::WeightedLebesgue => "weighted-lebesgue",
            MomentKind::WeightedGaussian => "weighted-gaussian",
            MomentKind::FockToeplitz => "fock-toeplitz",
        })
    }
}

/// Which measure multiplies the symbol in a weighted moment matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Lebesgue,
    Gaussian,
}

/// Hermitian (n+1)×(n+1) matrix of monomial inner products.
#[derive(Clone, Debug)]
pub struct MomentMatrix {
    kind: MomentKind,
    matrix: HermitianMatrix,
}

impl MomentMatrix {
    pub fn degree(&self) -> usize {
        self.matrix.dim() - 1
    }

    pub fn kind(&self) -> MomentKind {
        self.kind
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }

    pub fn get(&self, j: usize, k: usize) -> BigComplex {
        self.matrix.get(j, k)
    }

    /// Leading block of degree m.
    pub fn leading(&self, m: usize) -> MomentMatrix {
        MomentMatrix { kind: self.kind, matrix: self.matrix.leading(m + 1) }
    }
}

/// Σ c·(block entry) over weighted discs, transposed into the quadratic-form
/// convention.
fn assemble<'a>(
    n: usize,
    prec: u32,
    parts: impl Iterator<Item = (BigReal, &'a [Vec<BigComplex>])> + Clone,
) -> HermitianMatrix {
    HermitianMatrix::from_upper_fn(n + 1, |j, k| {
        let mut sum = BigComplex::zero(prec);
        for (c, block) in parts.clone() {
            sum += &block[k][j].scale(&c);
        }
        sum
    })
}

/// G_{jk} = ∫_Ω z^k z̄^j dm over a laminar region, by inclusion–exclusion.
pub fn gram_matrix(region: &RegionSet, n: usize, prec: u32) -> Result<MomentMatrix> {
    if region.is_empty() {
        return Err(Error::Domain("Gram matrix of an empty region".into()));
    }
    let blocks: Vec<_> =
        region.pieces().iter().map(|(d, c)| (BigReal::from_i64(*c, prec), lebesgue::lebesgue_block(d, n, prec))).collect();
    let matrix = assemble(n, prec, blocks.iter().map(|(c, b)| (c.clone(), b.as_slice())));
    Ok(MomentMatrix { kind: MomentKind::LebesgueGram, matrix })
}

fn weights(symbol: &Symbol, prec: u32) -> Vec<BigReal> {
    symbol.terms().iter().map(|t| BigReal::from_rational(&t.weight, prec)).collect()
}

/// Q_n(W)_{jk} = ∫ V z^k z̄^j dμ with dμ = dm or e^{−|z|²}dm.
pub fn weighted_moment_matrix(symbol: &Symbol, n: usize, weight: Weight, prec: u32) -> Result<MomentMatrix> {
    let ws = weights(symbol, prec);
    let matrix = match weight {
        Weight::Lebesgue => {
            let blocks: Vec<_> = symbol.discs().map(|d| lebesgue::lebesgue_block(d, n, prec)).collect();
            assemble(n, prec, ws.iter().cloned().zip(blocks.iter().map(|b| b.as_slice())))
        }
        Weight::Gaussian => {
            let blocks: Vec<_> = symbol.discs().map(|d| fock_block(d, n, prec)).collect::<Result<_>>()?;
            assemble(n, prec, ws.iter().cloned().zip(blocks.iter().map(|b| b.raw.as_slice())))
        }
    };
    let kind = match weight {
        Weight::Lebesgue => MomentKind::WeightedLebesgue,
        Weight::Gaussian => MomentKind::WeightedGaussian,
    };
    Ok(MomentMatrix { kind, matrix })
}

/// Matrix of T_V on span{e_0, …, e_N} with e_j = z^j/√(π j!).
pub fn toeplitz_truncation(symbol: &Symbol, n: usize, prec: u32) -> Result<MomentMatrix> {
    let ws = weights(symbol, prec);
    let blocks: Vec<_> = symbol.discs().map(|d| fock_block(d, n, prec)).collect::<Result<_>>()?;
    let matrix = assemble(n, prec, ws.iter().cloned().zip(blocks.iter().map(|b| b.normalized.as_slice())));
    Ok(MomentMatrix { kind: MomentKind::FockToeplitz, matrix })
}

/// Exact sup|V| as a BigReal, the operator-norm bound for the truncation.
pub fn norm_bound(symbol: &Symbol, prec: u32) -> BigReal {
    BigReal::from_rational(&Rational::from(symbol.sup_abs()), prec)
}
