//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Rotations sweep the upper triangle in row-major order. Real input takes a
//! dedicated kernel; complex input uses the phase-adjusted rotation
//! `x' = c·x − s·e^{−iφ}·y`, `y' = s·e^{iφ}·x + c·y` on columns (p, q).

use rug::ops::NegAssign;
use rug::{Assign, Float};

use super::complex::BigComplex;
use super::matrix::{ComplexMatrix, HermitianMatrix};
use super::real::BigReal;
use super::tridiag::{approximate_eigenbasis, orthonormalize_columns};
use super::PrecisionContext;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<BigReal>,
    /// Column `k` is the unit eigenvector of `values[k]`.
    pub vectors: Option<ComplexMatrix>,
    pub sweeps: u32,
    /// Off-diagonal Frobenius norm at exit.
    pub off_norm: BigReal,
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &HermitianMatrix, ctx: &PrecisionContext) -> Result<Vec<BigReal>> {
    Ok(hermitian_eigen(m, ctx, false)?.values)
}

pub fn hermitian_eigen(m: &HermitianMatrix, ctx: &PrecisionContext, want_vectors: bool) -> Result<Eigen> {
    eigen_impl(m, ctx, want_vectors, true)
}

fn eigen_impl(m: &HermitianMatrix, ctx: &PrecisionContext, want_vectors: bool, precondition: bool) -> Result<Eigen> {
    let n = m.dim();
    let prec = ctx.bits();
    let norm = m.frobenius_norm().with_prec(prec);
    let threshold = BigReal::pow2(ctx.jacobi_threshold_exponent(), prec) * &norm;
    if m.is_real() {
        let dense: Vec<Vec<BigReal>> =
            (0..n).map(|j| (0..n).map(|k| m.get(j, k).re.with_prec(prec)).collect()).collect();
        let basis = (precondition && n >= PRECONDITION_MIN_DIM && prec >= PRECONDITION_MIN_BITS)
            .then(|| preconditioner(&dense, prec))
            .flatten();
        let mut a: Vec<Float> = Vec::with_capacity(n * (n + 1) / 2);
        let mut v = want_vectors.then(|| {
            let mut v = vec![Float::new(prec); n * n];
            for j in 0..n {
                v[j * n + j].assign(1u32);
            }
            v
        });
        match &basis {
            Some(q) => {
                let rotated = congruence_real(&dense, q, prec);
                for j in 0..n {
                    for k in j..n {
                        a.push(rotated[j][k].clone().into_float());
                    }
                }
                if let Some(v) = v.as_mut() {
                    for j in 0..n {
                        for k in 0..n {
                            v[j * n + k].assign(q[j][k].as_float());
                        }
                    }
                }
            }
            None => {
                for j in 0..n {
                    for k in j..n {
                        a.push(Float::with_val(prec, dense[j][k].as_float()));
                    }
                }
            }
        }
        let (sweeps, off) = real_kernel(&mut a, n, prec, threshold.as_float(), ctx.max_jacobi_sweeps(), v.as_mut())?;
        let diag: Vec<BigReal> = (0..n).map(|j| BigReal::from_float(a[packed(n, j, j)].clone())).collect();
        let vectors = v.map(|v| {
            ComplexMatrix::from_fn(n, n, |j, k| BigComplex::from_real(BigReal::from_float(v[j * n + k].clone())))
        });
        Ok(sorted(diag, vectors, sweeps, BigReal::from_float(off)))
    } else {
        let mut re: Vec<Float> = Vec::with_capacity(n * (n + 1) / 2);
        let mut im: Vec<Float> = Vec::with_capacity(n * (n + 1) / 2);
        for j in 0..n {
            for k in j..n {
                let z = m.upper(j, k);
                re.push(Float::with_val(prec, z.re.as_float()));
                im.push(Float::with_val(prec, z.im.as_float()));
            }
        }
        let mut v = want_vectors.then(|| {
            let mut vr = vec![Float::new(prec); n * n];
            for j in 0..n {
                vr[j * n + j].assign(1u32);
            }
            (vr, vec![Float::new(prec); n * n])
        });
        let (sweeps, off) =
            complex_kernel(&mut re, &mut im, n, prec, threshold.as_float(), ctx.max_jacobi_sweeps(), v.as_mut())?;
        let diag: Vec<BigReal> = (0..n).map(|j| BigReal::from_float(re[packed(n, j, j)].clone())).collect();
        let vectors = v.map(|(vr, vi)| {
            ComplexMatrix::from_fn(n, n, |j, k| {
                BigComplex::new(BigReal::from_float(vr[j * n + k].clone()), BigReal::from_float(vi[j * n + k].clone()))
            })
        });
        Ok(sorted(diag, vectors, sweeps, BigReal::from_float(off)))
    }
}

const PRECONDITION_MIN_DIM: usize = 16;
const PRECONDITION_MIN_BITS: u32 = 384;

/// Approximate eigenbasis from a cheap solve at a third of the working
/// precision, re-orthonormalized at full precision. Graded matrices otherwise
/// spend one Jacobi sweep per few bits of dynamic range.
fn preconditioner(a: &[Vec<BigReal>], prec: u32) -> Option<Vec<Vec<BigReal>>> {
    let low = (prec / 3).max(128);
    let z = approximate_eigenbasis(a, low)?;
    let mut q: Vec<Vec<BigReal>> = z.iter().map(|row| row.iter().map(|x| x.with_prec(prec)).collect()).collect();
    orthonormalize_columns(&mut q, prec);
    Some(q)
}

/// Qᵀ·A·Q, full square result.
fn congruence_real(a: &[Vec<BigReal>], q: &[Vec<BigReal>], prec: u32) -> Vec<Vec<BigReal>> {
    let n = a.len();
    let mut aq = vec![vec![Float::new(prec); n]; n];
    let mut tmp = Float::new(prec);
    for (i, row) in a.iter().enumerate() {
        for (m, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for k in 0..n {
                tmp.assign(x.as_float() * q[m][k].as_float());
                aq[i][k] += &tmp;
            }
        }
    }
    let mut out = vec![vec![BigReal::zero(prec); n]; n];
    for j in 0..n {
        for k in j..n {
            let mut acc = Float::new(prec);
            for i in 0..n {
                tmp.assign(q[i][j].as_float() * &aq[i][k]);
                acc += &tmp;
            }
            let v = BigReal::from_float(acc);
            out[k][j] = v.clone();
            out[j][k] = v;
        }
    }
    out
}

fn sorted(diag: Vec<BigReal>, vectors: Option<ComplexMatrix>, sweeps: u32, off_norm: BigReal) -> Eigen {
    let mut order: Vec<usize> = (0..diag.len()).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| diag[i].clone()).collect();
    let vectors = vectors.map(|v| ComplexMatrix::from_fn(v.rows(), v.cols(), |j, k| v.get(j, order[k]).clone()));
    Eigen { values, vectors, sweeps, off_norm }
}

fn packed(n: usize, j: usize, k: usize) -> usize {
    j * (2 * n - j + 1) / 2 + (k - j)
}

/// Packed index of the unordered pair {j, k} and whether the stored entry is (j, k) itself.
fn sym(n: usize, j: usize, k: usize) -> (usize, bool) {
    if j <= k {
        (packed(n, j, k), true)
    } else {
        (packed(n, k, j), false)
    }
}

fn two_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = v.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    }
}

fn off_norm_real(a: &[Float], n: usize, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    let mut sq = Float::new(prec);
    for p in 0..n {
        for q in (p + 1)..n {
            sq.assign(a[packed(n, p, q)].square_ref());
            acc += &sq;
        }
    }
    acc *= 2u32;
    acc.sqrt()
}

fn real_kernel(
    a: &mut [Float],
    n: usize,
    prec: u32,
    threshold: &Float,
    max_sweeps: u32,
    mut vectors: Option<&mut Vec<Float>>,
) -> Result<(u32, Float)> {
    let skip = Float::with_val(prec, threshold / (n.max(1) as u32));
    let (mut theta, mut t, mut c, mut s, mut tau, mut h) =
        (Float::new(prec), Float::new(prec), Float::new(prec), Float::new(prec), Float::new(prec), Float::new(prec));
    let (mut t1, mut t2) = (Float::new(prec), Float::new(prec));
    let mut sweep = 0;
    loop {
        let off = off_norm_real(a, n, prec);
        if off < *threshold {
            return Ok((sweep, off));
        }
        if sweep >= max_sweeps {
            return Err(Error::ConvergenceFailure { sweeps: sweep, residual: off.to_f64() });
        }
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let ipq = packed(n, p, q);
                if a[ipq].is_zero() || *a[ipq].as_abs() < skip {
                    continue;
                }
                let (ipp, iqq) = (packed(n, p, p), packed(n, q, q));
                theta.assign(&a[iqq] - &a[ipp]);
                theta /= &a[ipq];
                theta >>= 1;
                // t = sign(θ) / (|θ| + sqrt(θ² + 1))
                t.assign(theta.square_ref());
                t += 1u32;
                t.sqrt_mut();
                t += &*theta.as_abs();
                t.recip_mut();
                if theta.is_sign_negative() {
                    t.neg_assign();
                }
                c.assign(t.square_ref());
                c += 1u32;
                c.sqrt_mut();
                c.recip_mut();
                s.assign(&t * &c);
                tau.assign(&c + 1u32);
                tau.recip_mut();
                tau *= &s;
                h.assign(&t * &a[ipq]);
                a[ipp] -= &h;
                a[iqq] += &h;
                a[ipq].assign(0u32);
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let (irp, _) = sym(n, r, p);
                    let (irq, _) = sym(n, r, q);
                    let (g, hh) = two_mut(a, irp, irq);
                    rotate_real(g, hh, &s, &tau, &mut t1, &mut t2);
                }
                if let Some(v) = vectors.as_deref_mut() {
                    for r in 0..n {
                        let (g, hh) = two_mut(v, r * n + p, r * n + q);
                        rotate_real(g, hh, &s, &tau, &mut t1, &mut t2);
                    }
                }
            }
        }
    }
}

/// g' = g − s(h + gτ), h' = h + s(g − hτ)
#[inline]
fn rotate_real(g: &mut Float, h: &mut Float, s: &Float, tau: &Float, t1: &mut Float, t2: &mut Float) {
    t1.assign(&*g * tau);
    *t1 += &*h;
    *t1 *= s;
    t2.assign(&*h * tau);
    *t2 -= &*g;
    *t2 *= s;
    *g -= &*t1;
    *h -= &*t2;
}

fn off_norm_complex(re: &[Float], im: &[Float], n: usize, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    let mut sq = Float::new(prec);
    for p in 0..n {
        for q in (p + 1)..n {
            let i = packed(n, p, q);
            sq.assign(re[i].square_ref());
            acc += &sq;
            sq.assign(im[i].square_ref());
            acc += &sq;
        }
    }
    acc *= 2u32;
    acc.sqrt()
}

struct Scratch {
    xr: Float,
    xi: Float,
    yr: Float,
    yi: Float,
    w: Float,
    nxr: Float,
    nxi: Float,
    nyr: Float,
    nyi: Float,
}

impl Scratch {
    fn new(prec: u32) -> Self {
        Scratch {
            xr: Float::new(prec),
            xi: Float::new(prec),
            yr: Float::new(prec),
            yi: Float::new(prec),
            w: Float::new(prec),
            nxr: Float::new(prec),
            nxi: Float::new(prec),
            nyr: Float::new(prec),
            nyi: Float::new(prec),
        }
    }

    /// From (x, y) in scratch, form x' = c x − se^{−iφ} y and y' = c y + se^{iφ} x.
    fn rotate(&mut self, c: &Float, ser: &Float, sei: &Float) {
        // x'_r = c xr − (ser yr + sei yi)
        self.nxr.assign(c * &self.xr);
        self.w.assign(ser * &self.yr);
        self.nxr -= &self.w;
        self.w.assign(sei * &self.yi);
        self.nxr -= &self.w;
        // x'_i = c xi − (ser yi − sei yr)
        self.nxi.assign(c * &self.xi);
        self.w.assign(ser * &self.yi);
        self.nxi -= &self.w;
        self.w.assign(sei * &self.yr);
        self.nxi += &self.w;
        // y'_r = c yr + (ser xr − sei xi)
        self.nyr.assign(c * &self.yr);
        self.w.assign(ser * &self.xr);
        self.nyr += &self.w;
        self.w.assign(sei * &self.xi);
        self.nyr -= &self.w;
        // y'_i = c yi + (ser xi + sei xr)
        self.nyi.assign(c * &self.yi);
        self.w.assign(ser * &self.xi);
        self.nyi += &self.w;
        self.w.assign(sei * &self.xr);
        self.nyi += &self.w;
    }
}

fn complex_kernel(
    re: &mut [Float],
    im: &mut [Float],
    n: usize,
    prec: u32,
    threshold: &Float,
    max_sweeps: u32,
    mut vectors: Option<&mut (Vec<Float>, Vec<Float>)>,
) -> Result<(u32, Float)> {
    let skip = Float::with_val(prec, threshold / (n.max(1) as u32));
    let (mut b, mut er, mut ei, mut zeta, mut t, mut c, mut s, mut ser, mut sei, mut h) = (
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
    );
    let mut sc = Scratch::new(prec);
    let mut sweep = 0;
    loop {
        let off = off_norm_complex(re, im, n, prec);
        if off < *threshold {
            return Ok((sweep, off));
        }
        if sweep >= max_sweeps {
            return Err(Error::ConvergenceFailure { sweeps: sweep, residual: off.to_f64() });
        }
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let ipq = packed(n, p, q);
                b.assign(re[ipq].hypot_ref(&im[ipq]));
                if b.is_zero() || b < skip {
                    continue;
                }
                er.assign(&re[ipq] / &b);
                ei.assign(&im[ipq] / &b);
                let (ipp, iqq) = (packed(n, p, p), packed(n, q, q));
                zeta.assign(&re[iqq] - &re[ipp]);
                zeta /= &b;
                zeta >>= 1;
                t.assign(zeta.square_ref());
                t += 1u32;
                t.sqrt_mut();
                t += &*zeta.as_abs();
                t.recip_mut();
                if zeta.is_sign_negative() {
                    t.neg_assign();
                }
                c.assign(t.square_ref());
                c += 1u32;
                c.sqrt_mut();
                c.recip_mut();
                s.assign(&t * &c);
                ser.assign(&s * &er);
                sei.assign(&s * &ei);
                h.assign(&t * &b);
                re[ipp] -= &h;
                re[iqq] += &h;
                re[ipq].assign(0u32);
                im[ipq].assign(0u32);
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let (irp, dp) = sym(n, r, p);
                    let (irq, dq) = sym(n, r, q);
                    sc.xr.assign(&re[irp]);
                    sc.xi.assign(&im[irp]);
                    if !dp {
                        sc.xi.neg_assign();
                    }
                    sc.yr.assign(&re[irq]);
                    sc.yi.assign(&im[irq]);
                    if !dq {
                        sc.yi.neg_assign();
                    }
                    sc.rotate(&c, &ser, &sei);
                    re[irp].assign(&sc.nxr);
                    im[irp].assign(&sc.nxi);
                    if !dp {
                        im[irp].neg_assign();
                    }
                    re[irq].assign(&sc.nyr);
                    im[irq].assign(&sc.nyi);
                    if !dq {
                        im[irq].neg_assign();
                    }
                }
                if let Some((vr, vi)) = vectors.as_deref_mut() {
                    for r in 0..n {
                        let (ip, iq) = (r * n + p, r * n + q);
                        sc.xr.assign(&vr[ip]);
                        sc.xi.assign(&vi[ip]);
                        sc.yr.assign(&vr[iq]);
                        sc.yi.assign(&vi[iq]);
                        sc.rotate(&c, &ser, &sei);
                        vr[ip].assign(&sc.nxr);
                        vi[ip].assign(&sc.nxi);
                        vr[iq].assign(&sc.nyr);
                        vi[iq].assign(&sc.nyi);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(192).unwrap()
    }

    fn real(v: &[&[f64]]) -> HermitianMatrix {
        HermitianMatrix::from_real_fn(v.len(), 192, |j, k| BigReal::from_f64(v[j][k], 192))
    }

    #[test]
    fn identity_and_diagonal() {
        let e = hermitian_eigenvalues(&HermitianMatrix::identity(3, 192), &ctx()).unwrap();
        assert!(e.iter().all(|x| *x == 1.0));
        let e = hermitian_eigenvalues(&real(&[&[3.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]), &ctx()).unwrap();
        assert_eq!(e.iter().map(BigReal::to_f64).collect::<Vec<_>>(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn swap_matrix() {
        let e = hermitian_eigenvalues(&real(&[&[0.0, 1.0], &[1.0, 0.0]]), &ctx()).unwrap();
        assert!((e[0].to_f64() + 1.0).abs() < 1e-40 && (e[1].to_f64() - 1.0).abs() < 1e-40);
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let m = HermitianMatrix::from_upper_fn(2, |j, k| {
            if j == k {
                BigComplex::one(192)
            } else {
                BigComplex::i(192)
            }
        });
        let e = hermitian_eigen(&m, &ctx(), true).unwrap();
        assert!(e.values[0].abs().log2_abs() < -180.0);
        assert!((&e.values[1] - &BigReal::from_u64(2, 192)).abs().log2_abs() < -180.0);
        // M v = λ v for each column
        let v = e.vectors.unwrap();
        let mv = m.to_dense().matmul(&v);
        for k in 0..2 {
            for j in 0..2 {
                let lhs = mv.get(j, k);
                let rhs = v.get(j, k).scale(&e.values[k]);
                assert!((lhs - &rhs).abs().log2_abs() < -170.0);
            }
        }
    }

    #[test]
    fn preconditioned_path_agrees_with_plain_sweeps() {
        let bits = 448;
        let ctx = PrecisionContext::new(bits).unwrap();
        let m = HermitianMatrix::from_real_fn(20, bits, |j, k| BigReal::one(bits).div_u64((j + k + 1) as u64));
        let fast = eigen_impl(&m, &ctx, true, true).unwrap();
        let plain = eigen_impl(&m, &ctx, false, false).unwrap();
        assert!(fast.sweeps < plain.sweeps);
        for (a, b) in fast.values.iter().zip(&plain.values) {
            assert!((a - b).abs().log2_abs() < -420.0);
        }
        // smallest eigenvalue of the 20×20 Hilbert matrix is about 1.3e-28
        assert!(fast.values[0] > 0.0 && fast.values[0].to_f64() < 1e-27);
        let v = fast.vectors.unwrap();
        let gram = v.adjoint().matmul(&v);
        assert!(gram.distance(&ComplexMatrix::identity(20, bits)).log2_abs() < -420.0);
    }
}
