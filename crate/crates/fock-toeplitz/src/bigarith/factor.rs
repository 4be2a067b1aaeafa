//! Cholesky factorization, whitening of a definite pencil, and pivoted LDLᵀ inertia.

use serde::Serialize;

use super::complex::BigComplex;
use super::matrix::{ComplexMatrix, HermitianMatrix};
use super::real::BigReal;
use crate::error::{Error, Result};

/// Lower-triangular `L` with `M = L·L*` and a positive real diagonal.
#[derive(Clone, Debug)]
pub struct CholeskyFactor(ComplexMatrix);

impl CholeskyFactor {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    /// Solve `L·X = Y`.
    pub fn solve_lower(&self, y: &ComplexMatrix) -> ComplexMatrix {
        let l = &self.0;
        let n = l.rows();
        let mut x = y.clone();
        for k in 0..y.cols() {
            for i in 0..n {
                let mut acc = y.get(i, k).clone();
                for m in 0..i {
                    acc -= &(l.get(i, m) * x.get(m, k));
                }
                x.set(i, k, acc.div_real(&l.get(i, i).re));
            }
        }
        x
    }

    /// `L^{-1}`, lower triangular.
    pub fn inverse(&self) -> ComplexMatrix {
        let prec = self.0.get(0, 0).prec();
        self.solve_lower(&ComplexMatrix::identity(self.dim(), prec))
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.0.matmul(&self.0.adjoint())
    }
}

/// `M = L·L*`. Runs at the precision of `M`.
pub fn cholesky(m: &HermitianMatrix) -> Result<CholeskyFactor> {
    let n = m.dim();
    let prec = m.prec();
    let mut l = ComplexMatrix::zeros(n, n, prec);
    for j in 0..n {
        let mut d = m.diag(j).clone();
        for k in 0..j {
            d -= &l.get(j, k).norm_sqr();
        }
        if !d.is_positive() {
            return Err(Error::NotPositiveDefinite { dimension: j + 1 });
        }
        let ljj = d.sqrt();
        for i in (j + 1)..n {
            let mut acc = m.get(i, j);
            for k in 0..j {
                acc -= &(l.get(i, k) * &l.get(j, k).conj());
            }
            l.set(i, j, acc.div_real(&ljj));
        }
        l.set(j, j, BigComplex::from_real(ljj));
    }
    Ok(CholeskyFactor(l))
}

/// `L^{-1}·B·L^{-*}` where `G = L·L*`: a Hermitian matrix carrying the
/// generalized eigenvalues of the pencil (B, G).
pub fn whiten(b: &HermitianMatrix, g: &HermitianMatrix) -> Result<HermitianMatrix> {
    let factor = cholesky(g)?;
    Ok(whiten_with(b, &factor))
}

pub fn whiten_with(b: &HermitianMatrix, factor: &CholeskyFactor) -> HermitianMatrix {
    assert_eq!(b.dim(), factor.dim());
    // Z = L^{-1} B; then L^{-1} Z* = L^{-1} B L^{-*} because B is Hermitian.
    let z = factor.solve_lower(&b.to_dense());
    let w = factor.solve_lower(&z.adjoint());
    HermitianMatrix::from_upper_fn(b.dim(), |j, k| w.get(j, k).clone())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InertiaTriple {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

impl InertiaTriple {
    pub fn dim(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }

    /// Sign counts of a list of eigenvalues.
    pub fn from_eigenvalues(values: &[BigReal], zero_threshold: &BigReal) -> Self {
        let mut out = InertiaTriple::default();
        for v in values {
            if v.abs() <= *zero_threshold {
                out.n_zero += 1;
            } else if v.is_positive() {
                out.n_plus += 1;
            } else {
                out.n_minus += 1;
            }
        }
        out
    }

    fn tally(&mut self, v: &BigReal, zero_threshold: &BigReal) {
        if v.abs() <= *zero_threshold {
            self.n_zero += 1;
        } else if v.is_positive() {
            self.n_plus += 1;
        } else {
            self.n_minus += 1;
        }
    }
}

/// Default zero threshold for inertia: 2^{-bits/3}·‖M‖_F.
pub fn default_zero_threshold(m: &HermitianMatrix, bits: u32) -> BigReal {
    let e = -((bits / 3) as i32);
    BigReal::pow2(e, m.prec()) * m.frobenius_norm()
}

/// Inertia from a Bunch–Parlett (complete pivoting) LDLᵀ factorization.
/// Pivots of magnitude at most `zero_threshold` count as zero; 2×2 blocks are
/// classified through their two eigenvalues.
pub fn ldlt_inertia(m: &HermitianMatrix, zero_threshold: &BigReal) -> InertiaTriple {
    let n = m.dim();
    let prec = m.prec();
    let alpha = (BigReal::one(prec) + BigReal::from_u64(17, prec).sqrt()).div_u64(8);
    let mut a: Vec<Vec<BigComplex>> = (0..n).map(|j| (0..n).map(|k| m.get(j, k)).collect()).collect();
    let mut out = InertiaTriple::default();
    let mut k = 0;
    while k < n {
        let (mut mu0, mut r0, mut s0) = (BigReal::zero(prec), k, k);
        let (mut mu1, mut d0) = (BigReal::zero(prec), k);
        for i in k..n {
            let di = a[i][i].re.abs();
            if di > mu1 {
                mu1 = di;
                d0 = i;
            }
            for j in (i + 1)..n {
                let v = a[i][j].abs();
                if v > mu0 {
                    mu0 = v;
                    r0 = i;
                    s0 = j;
                }
            }
        }
        let mu_all = mu0.max(&mu1);
        if mu_all <= *zero_threshold {
            out.n_zero += n - k;
            break;
        }
        if mu1 >= &alpha * &mu0 {
            swap_sym(&mut a, k, d0);
            let d = a[k][k].re.clone();
            out.tally(&d, zero_threshold);
            let rest: Vec<BigComplex> = (k + 1..n).map(|i| a[i][k].clone()).collect();
            for (ii, i) in (k + 1..n).enumerate() {
                for (jj, j) in (k + 1..n).enumerate() {
                    let upd = (&rest[ii] * &rest[jj].conj()).div_real(&d);
                    a[i][j] -= &upd;
                }
                a[i][i].im = BigReal::zero(prec);
            }
            k += 1;
        } else {
            swap_sym(&mut a, k, r0);
            let s = if s0 == k { r0 } else { s0 };
            swap_sym(&mut a, k + 1, s);
            let (p, b, q) = (a[k][k].re.clone(), a[k][k + 1].clone(), a[k + 1][k + 1].re.clone());
            // eigenvalues of [[p, b], [b̄, q]]
            let half_sum = (&p + &q).div_u64(2);
            let disc = ((&p - &q).square().div_u64(4) + b.norm_sqr()).sqrt();
            out.tally(&(&half_sum + &disc), zero_threshold);
            out.tally(&(&half_sum - &disc), zero_threshold);
            let det = &p * &q - b.norm_sqr();
            // E^{-1} = (1/det)[[q, -b], [-b̄, p]]
            let inv = [
                [BigComplex::from_real(&q / &det), (-&b).div_real(&det)],
                [(-&b.conj()).div_real(&det), BigComplex::from_real(&p / &det)],
            ];
            let cols: Vec<[BigComplex; 2]> = (k + 2..n).map(|i| [a[i][k].clone(), a[i][k + 1].clone()]).collect();
            // rows of C·E^{-1}
            let ce: Vec<[BigComplex; 2]> = cols
                .iter()
                .map(|c| {
                    [
                        &(&c[0] * &inv[0][0]) + &(&c[1] * &inv[1][0]),
                        &(&c[0] * &inv[0][1]) + &(&c[1] * &inv[1][1]),
                    ]
                })
                .collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    let upd = &(&ce[ii][0] * &cols[jj][0].conj()) + &(&ce[ii][1] * &cols[jj][1].conj());
                    a[i][j] -= &upd;
                }
                a[i][i].im = BigReal::zero(prec);
            }
            k += 2;
        }
    }
    out
}

fn swap_sym(a: &mut [Vec<BigComplex>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 192;

    fn real(v: &[&[f64]]) -> HermitianMatrix {
        HermitianMatrix::from_real_fn(v.len(), P, |j, k| BigReal::from_f64(v[j][k], P))
    }

    #[test]
    fn cholesky_hand_example() {
        let l = cholesky(&real(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        let two = BigReal::from_u64(2, P);
        let m = l.matrix();
        assert!((&m.get(0, 0).re - &two.sqrt()).abs().log2_abs() < -185.0);
        assert!((&m.get(1, 0).re - &two.sqrt().recip()).abs().log2_abs() < -185.0);
        assert!((&m.get(1, 1).re - &BigReal::from_f64(1.5, P).sqrt()).abs().log2_abs() < -185.0);
    }

    #[test]
    fn cholesky_reports_failing_dimension() {
        match cholesky(&real(&[&[1.0, 2.0], &[2.0, 1.0]])) {
            Err(Error::NotPositiveDefinite { dimension }) => assert_eq!(dimension, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn whiten_diagonal_pencil() {
        let w = whiten(&real(&[&[2.0, 0.0], &[0.0, 8.0]]), &real(&[&[1.0, 0.0], &[0.0, 4.0]])).unwrap();
        assert_eq!(w.get(0, 0).re, 2.0);
        assert_eq!(w.get(1, 1).re, 2.0);
        assert!(w.get(0, 1).is_zero());
    }

    #[test]
    fn inertia_trivial_cases() {
        let pi = BigReal::pi(P);
        let m = HermitianMatrix::diagonal(&[pi.clone(), pi.div_u64(2)]);
        assert_eq!(ldlt_inertia(&m, &BigReal::zero(P)), InertiaTriple { n_plus: 2, n_zero: 0, n_minus: 0 });
        let m = real(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, -1.0]]);
        assert_eq!(ldlt_inertia(&m, &BigReal::zero(P)), InertiaTriple { n_plus: 1, n_zero: 1, n_minus: 1 });
        // forces a 2×2 pivot
        let m = real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(ldlt_inertia(&m, &BigReal::zero(P)), InertiaTriple { n_plus: 1, n_zero: 0, n_minus: 1 });
    }
}
