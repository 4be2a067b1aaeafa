//! Approximate eigenbasis for real symmetric matrices: Householder
//! tridiagonalization followed by implicit QL. Used only to precondition the
//! full-precision Jacobi pass; its eigenvalues are discarded.

use rug::{Assign, Float};

use super::real::BigReal;

/// Orthogonal `Z` (row-major, n×n) with `Zᵀ·A·Z` close to diagonal, or `None`
/// when QL stalls.
pub(crate) fn approximate_eigenbasis(a: &[Vec<BigReal>], prec: u32) -> Option<Vec<Vec<BigReal>>> {
    let n = a.len();
    let mut a: Vec<Vec<BigReal>> = a.iter().map(|row| row.iter().map(|x| x.with_prec(prec)).collect()).collect();
    let mut q: Vec<Vec<BigReal>> =
        (0..n).map(|j| (0..n).map(|k| if j == k { BigReal::one(prec) } else { BigReal::zero(prec) }).collect()).collect();
    householder(&mut a, &mut q, prec);
    let mut d: Vec<BigReal> = (0..n).map(|j| a[j][j].clone()).collect();
    let mut e: Vec<BigReal> = (0..n).map(|j| if j + 1 < n { a[j + 1][j].clone() } else { BigReal::zero(prec) }).collect();
    implicit_ql(&mut d, &mut e, &mut q, prec)?;
    Some(q)
}

fn householder(a: &mut [Vec<BigReal>], q: &mut [Vec<BigReal>], prec: u32) {
    let n = a.len();
    for k in 0..n.saturating_sub(2) {
        let mut norm2 = BigReal::zero(prec);
        for i in (k + 1)..n {
            norm2 += &a[i][k].square();
        }
        if norm2.is_zero() {
            continue;
        }
        let norm = norm2.sqrt();
        let alpha = if a[k + 1][k].is_negative() { norm.clone() } else { -&norm };
        let mut v: Vec<BigReal> = ((k + 1)..n).map(|i| a[i][k].clone()).collect();
        v[0] -= &alpha;
        let mut vn = BigReal::zero(prec);
        for x in &v {
            vn += &x.square();
        }
        if vn.is_zero() {
            continue;
        }
        let vn = vn.sqrt();
        for x in v.iter_mut() {
            *x = &*x / &vn;
        }
        let m = v.len();
        // p = A22 v, K = vᵀp, w = p − K v, A22 ← A22 − 2(v wᵀ + w vᵀ)
        let p: Vec<BigReal> = (0..m)
            .map(|i| {
                let mut acc = BigReal::zero(prec);
                for j in 0..m {
                    acc += &(&a[k + 1 + i][k + 1 + j] * &v[j]);
                }
                acc
            })
            .collect();
        let mut kk = BigReal::zero(prec);
        for i in 0..m {
            kk += &(&v[i] * &p[i]);
        }
        let w: Vec<BigReal> = (0..m).map(|i| &p[i] - &(&kk * &v[i])).collect();
        let v2: Vec<Float> = v.iter().map(|x| Float::with_val(prec, x.as_float() * 2u32)).collect();
        let mut tmp = Float::new(prec);
        for i in 0..m {
            let row = &mut a[k + 1 + i];
            for j in 0..m {
                let x = row[k + 1 + j].as_float_mut();
                tmp.assign(&v2[i] * w[j].as_float());
                *x -= &tmp;
                tmp.assign(w[i].as_float() * &v2[j]);
                *x -= &tmp;
            }
        }
        a[k + 1][k] = alpha.clone();
        a[k][k + 1] = alpha;
        for i in (k + 2)..n {
            a[i][k] = BigReal::zero(prec);
            a[k][i] = BigReal::zero(prec);
        }
        // Q ← Q·H on columns k+1..n
        for row in q.iter_mut() {
            let mut dot = BigReal::zero(prec);
            for j in 0..m {
                dot += &(&row[k + 1 + j] * &v[j]);
            }
            let dot = dot.mul_u64(2);
            for j in 0..m {
                let upd = &dot * &v[j];
                row[k + 1 + j] -= &upd;
            }
        }
    }
}

fn implicit_ql(d: &mut [BigReal], e: &mut [BigReal], z: &mut [Vec<BigReal>], prec: u32) -> Option<()> {
    let n = d.len();
    let eps = BigReal::pow2(-(prec as i32) + 4, prec);
    let one = BigReal::one(prec);
    let (mut t1, mut t2) = (Float::new(prec), Float::new(prec));
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= &eps * &dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 80 {
                return None;
            }
            let mut g = (&d[l + 1] - &d[l]) / e[l].mul_u64(2);
            let mut r = g.hypot(&one);
            let signed_r = if g.is_negative() { -&r } else { r.clone() };
            g = &d[m] - &d[l] + &e[l] / (&g + &signed_r);
            let (mut s, mut c, mut p) = (one.clone(), one.clone(), BigReal::zero(prec));
            let mut early = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = &s * &e[i];
                let b = &c * &e[i];
                r = f.hypot(&g);
                e[i + 1] = r.clone();
                if r.is_zero() {
                    d[i + 1] -= &p;
                    e[m] = BigReal::zero(prec);
                    early = true;
                    break;
                }
                s = &f / &r;
                c = &g / &r;
                g = &d[i + 1] - &p;
                r = (&d[i] - &g) * &s + (&c * &b).mul_u64(2);
                p = &s * &r;
                d[i + 1] = &g + &p;
                g = &c * &r - &b;
                let (sf, cf) = (s.as_float(), c.as_float());
                for row in z.iter_mut() {
                    let (lo, hi) = row.split_at_mut(i + 1);
                    let (x, y) = (lo[i].as_float_mut(), hi[0].as_float_mut());
                    // y' = s x + c y, x' = c x − s y
                    t1.assign(sf * &*y);
                    t2.assign(sf * &*x);
                    *y *= cf;
                    *y += &t2;
                    *x *= cf;
                    *x -= &t1;
                }
            }
            if early {
                continue;
            }
            d[l] -= &p;
            e[l] = g;
            e[m] = BigReal::zero(prec);
        }
    }
    Some(())
}

/// Orthonormalize the columns of `v` (row-major) by classical Gram–Schmidt
/// applied twice.
pub(crate) fn orthonormalize_columns(v: &mut [Vec<BigReal>], prec: u32) {
    let n = v.len();
    if n == 0 {
        return;
    }
    let cols = v[0].len();
    let mut c: Vec<Vec<Float>> =
        (0..cols).map(|k| (0..n).map(|i| Float::with_val(prec, v[i][k].as_float())).collect()).collect();
    let mut tmp = Float::new(prec);
    for k in 0..cols {
        let (done, rest) = c.split_at_mut(k);
        let col = &mut rest[0];
        for _ in 0..2 {
            let dots: Vec<Float> = done
                .iter()
                .map(|u| {
                    let mut acc = Float::new(prec);
                    for (a, b) in u.iter().zip(col.iter()) {
                        tmp.assign(a * b);
                        acc += &tmp;
                    }
                    acc
                })
                .collect();
            for (u, dot) in done.iter().zip(&dots) {
                for (x, a) in col.iter_mut().zip(u) {
                    tmp.assign(a * dot);
                    *x -= &tmp;
                }
            }
        }
        let mut norm = Float::new(prec);
        for x in col.iter() {
            tmp.assign(x.square_ref());
            norm += &tmp;
        }
        norm.sqrt_mut();
        for x in col.iter_mut() {
            *x /= &norm;
        }
    }
    for (k, col) in c.into_iter().enumerate() {
        for (i, x) in col.into_iter().enumerate() {
            v[i][k] = BigReal::from_float(x);
        }
    }
}
