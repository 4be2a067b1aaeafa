//! Gaussian-weighted disc moments F_{jk} = ∫_{D_r(a)} z^j z̄^k e^{−|z|²} dm.
//!
//! With z = a + w the weight factors as e^{−|a|²}·e^{−|w|²}·e^{−āw}·e^{−aw̄}.
//! Expanding the last two exponentials and integrating over |w| < r gives
//! μ_{pq} = ∫ w^p w̄^q e^{−|w+a|²+|a|²} = π Σ_m u_{m−p} ū_{m−q} γ(m+1, r²)
//! with u_s = (−ā)^s/s!, and F = e^{−|a|²}·B μ B^H with B_{jp} = C(j,p)a^{j−p}.
//! The binomial transform cancels heavily, so the series runs at a working
//! precision padded by the growth of (|a|+r)^j/√j!.

use std::collections::HashMap;
use std::f64::consts::LOG2_E;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Assign, Float};

use super::binomial::binomial_rows;
use super::quadrature::{polar_nodes, polar_nodes_upper};
use crate::bigarith::{lower_incomplete_gamma_ladder, log2_factorial, BigComplex, BigReal};
use crate::error::{Error, Result};
use crate::symbols::Disc;

/// Precision of the quadrature cross-check, independent of the series precision.
pub const GATE_BITS: u32 = 192;
const FIRST_NODES: usize = 32;
const MAX_NODES: usize = 512;

/// ‖z^j‖² in the Fock space: π·j!.
pub fn fock_norm_sq(j: usize, prec: u32) -> BigReal {
    crate::bigarith::factorial(j as u32, prec) * BigReal::pi(prec)
}

/// Single Gaussian moment; served from the cached block.
pub fn fock_moment(disc: &Disc, j: usize, k: usize, prec: u32) -> Result<BigComplex> {
    Ok(fock_block(disc, j.max(k), prec)?.raw[j][k].clone())
}

/// Cached moments of one disc. `raw[j][k]` = F_{jk}; `normalized[j][k]` =
/// F_{jk}/√(π j!·π k!).
#[derive(Debug)]
pub struct FockBlock {
    pub degree: usize,
    pub raw: Vec<Vec<BigComplex>>,
    pub normalized: Vec<Vec<BigComplex>>,
}

/// Blocks are computed at degrees rounded up to a multiple of 16 so that an
/// entry never depends on which degree was requested first.
fn bucket(n: usize) -> usize {
    (n / 16 + 1) * 16 - 1
}

/// Block for degree ≥ n. Off-center blocks pass the quadrature gate before
/// they are cached.
pub fn fock_block(disc: &Disc, n: usize, prec: u32) -> Result<Arc<FockBlock>> {
    type Cache = Mutex<HashMap<(Disc, usize, u32), Arc<FockBlock>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let degree = bucket(n);
    let key = (disc.clone(), degree, prec);
    if let Some(hit) = cache.lock().expect("moment cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let raw = if disc.center().norm_sq() == 0 {
        centered(disc, degree, prec)?
    } else {
        let raw = series(disc, degree, prec)?;
        quadrature_gate(disc, &raw, prec)?;
        raw
    };
    let norms: Vec<BigReal> = (0..=degree).map(|j| fock_norm_sq(j, prec).sqrt()).collect();
    let normalized = raw
        .iter()
        .enumerate()
        .map(|(j, row)| row.iter().enumerate().map(|(k, x)| x.div_real(&(&norms[j] * &norms[k]))).collect())
        .collect();
    let block = Arc::new(FockBlock { degree, raw, normalized });
    cache.lock().expect("moment cache poisoned").insert(key, block.clone());
    Ok(block)
}

fn centered(disc: &Disc, n: usize, prec: u32) -> Result<Vec<Vec<BigComplex>>> {
    let r2 = BigReal::from_rational(&disc.radius_sq(), prec + 32);
    let gammas = lower_incomplete_gamma_ladder(n as u32 + 1, &r2)?;
    let pi = BigReal::pi(prec + 32);
    let mut out = vec![vec![BigComplex::zero(prec); n + 1]; n + 1];
    for (j, g) in gammas.iter().enumerate() {
        out[j][j] = BigComplex::from_real((&pi * g).with_prec(prec));
    }
    Ok(out)
}

/// log2 of the largest (|a|+r)^j/√j! for j ≤ n.
fn growth_log2(reach: f64, n: usize) -> f64 {
    (0..=n).map(|j| j as f64 * reach.log2() - 0.5 * log2_factorial(j as u64)).fold(0.0, f64::max)
}

fn working_bits(disc: &Disc, n: usize, prec: u32) -> u32 {
    let (x, y) = disc.center().to_f64();
    let dist = x.hypot(y);
    let r = disc.radius().to_f64();
    let extra = 2.0 * growth_log2(dist + r, n) + 2.0 * dist * r * LOG2_E + 2.0 * ((n + 1) as f64).log2() + 2.0 * r.max(1.0).log2();
    prec + extra.ceil() as u32 + 32
}

/// Exponential-series length S with (|a|r)^{2S}/(S!)² < 2^{−bits}.
fn series_length(ar: f64, bits: u32) -> usize {
    let mut s = 0usize;
    loop {
        let log_term = if ar > 0.0 { 2.0 * s as f64 * ar.log2() } else { f64::NEG_INFINITY } - 2.0 * log2_factorial(s as u64);
        if s as f64 > ar && log_term < -f64::from(bits) - 8.0 {
            return s;
        }
        s += 1;
    }
}

fn series(disc: &Disc, n: usize, prec: u32) -> Result<Vec<Vec<BigComplex>>> {
    let work = working_bits(disc, n, prec);
    let a = disc.center().to_complex(work);
    let (x, y) = disc.center().to_f64();
    let r = disc.radius().to_f64();
    let tail = series_length(x.hypot(y) * r, work);
    let top = n + tail;
    let r2 = BigReal::from_rational(&disc.radius_sq(), work);
    let gammas = lower_incomplete_gamma_ladder(top as u32 + 1, &r2)?;

    // u_s = (−ā)^s / s!
    let minus_abar = -a.conj();
    let mut u = Vec::with_capacity(tail + n + 1);
    u.push(BigComplex::one(work));
    for s in 1..=top {
        let next = (&u[s - 1] * &minus_abar).div_real(&BigReal::from_u64(s as u64, work));
        u.push(next);
    }
    // μ_{pq} for p ≤ q; the rest by Hermitian symmetry
    let pi = BigReal::pi(work);
    let mut mu = vec![vec![BigComplex::zero(work); n + 1]; n + 1];
    for p in 0..=n {
        for q in p..=n {
            let mut sum = BigComplex::zero(work);
            for m in q..=top {
                let term = &u[m - p] * &u[m - q].conj();
                sum += &term.scale(&gammas[m]);
            }
            let value = sum.scale(&pi);
            mu[q][p] = value.conj();
            mu[p][q] = value;
        }
    }
    // X = B μ, then F = X B^H
    let rows = binomial_rows(n, work);
    let apow = a.powers(n + 1);
    let b: Vec<Vec<BigComplex>> = (0..=n).map(|j| (0..=j).map(|p| apow[j - p].scale(&rows[j][p])).collect()).collect();
    let xm: Vec<Vec<BigComplex>> = (0..=n)
        .map(|j| {
            (0..=n)
                .map(|q| {
                    let mut sum = BigComplex::zero(work);
                    for p in 0..=j {
                        sum += &(&b[j][p] * &mu[p][q]);
                    }
                    sum
                })
                .collect()
        })
        .collect();
    let damping = (-a.norm_sqr()).exp();
    let mut out = vec![vec![BigComplex::zero(prec); n + 1]; n + 1];
    for j in 0..=n {
        for k in j..=n {
            let mut sum = BigComplex::zero(work);
            for q in 0..=k {
                sum += &(&xm[j][q] * &b[k][q].conj());
            }
            let value = sum.scale(&damping);
            out[k][j] = value.conj().with_prec(prec);
            out[j][k] = value.with_prec(prec);
        }
    }
    Ok(out)
}

/// Entries checked against quadrature: row 0, row n and the diagonal, in
/// that order (k = 0..=n within each).
fn gate_entries(n: usize) -> Vec<(usize, usize)> {
    [0, n].iter().flat_map(|&j| (0..=n).map(move |k| (j, k))).chain((0..=n).map(|k| (k, k))).collect()
}

/// Polar Gauss–Legendre values of the gate entries with m×m nodes. The inner
/// loop works on raw floats in place; it dominates the cost of the gate.
fn quadrature_values(disc: &Disc, n: usize, m: usize, prec: u32) -> Vec<BigComplex> {
    let len = n + 1;
    let fresh = || vec![Float::new(prec); len];
    let (mut acc_re, mut acc_im) = (vec![Float::new(prec); 3 * len], vec![Float::new(prec); 3 * len]);
    let (mut pow_re, mut pow_im) = (fresh(), fresh());
    let (mut t, mut lead_re, mut lead_im, mut lead_sq) = (Float::new(prec), Float::new(prec), Float::new(prec), Float::new(prec));
    let real_axis = disc.center().y == 0;
    let visit = |f: &mut dyn FnMut(&BigComplex, &BigReal)| {
        if real_axis {
            polar_nodes_upper(disc, m, m, prec, f)
        } else {
            polar_nodes(disc, m, m, prec, f)
        }
    };
    visit(&mut |z, w| {
        let weight = w * &(-z.norm_sqr()).exp();
        let (zr, zi) = (z.re.as_float(), z.im.as_float());
        pow_re[0].assign(1);
        pow_im[0].assign(0);
        for k in 1..len {
            let (lo_re, hi_re) = pow_re.split_at_mut(k);
            let (lo_im, hi_im) = pow_im.split_at_mut(k);
            let (xr, xi) = (&lo_re[k - 1], &lo_im[k - 1]);
            hi_re[0].assign(xr * zr);
            t.assign(xi * zi);
            hi_re[0] -= &t;
            hi_im[0].assign(xr * zi);
            t.assign(xi * zr);
            hi_im[0] += &t;
        }
        let wf = weight.as_float();
        lead_re.assign(&pow_re[n] * wf);
        lead_im.assign(&pow_im[n] * wf);
        for k in 0..len {
            let (pr, pi) = (&pow_re[k], &pow_im[k]);
            // w·conj(z^k)
            t.assign(pr * wf);
            acc_re[k] += &t;
            t.assign(pi * wf);
            acc_im[k] -= &t;
            // w·z^n·conj(z^k)
            let row = len + k;
            t.assign(&lead_re * pr);
            acc_re[row] += &t;
            t.assign(&lead_im * pi);
            acc_re[row] += &t;
            t.assign(&lead_im * pr);
            acc_im[row] += &t;
            t.assign(&lead_re * pi);
            acc_im[row] -= &t;
            // w·|z^k|²
            let diag = 2 * len + k;
            t.assign(pr.square_ref());
            lead_sq.assign(pi.square_ref());
            t += &lead_sq;
            t *= wf;
            acc_re[diag] += &t;
        }
    });
    if real_axis {
        acc_im.iter_mut().for_each(|x| x.assign(0));
    }
    acc_re.into_iter().zip(acc_im).map(|(re, im)| BigComplex::new(BigReal::from_float(re), BigReal::from_float(im))).collect()
}

/// Converged quadrature values for the gate entries at `GATE_BITS`, cached
/// per disc and degree. Convergence is judged against `scales` (log2 of
/// √(F_jj·F_kk) per entry).
fn converged_quadrature(disc: &Disc, n: usize, scales: &[f64]) -> Result<Arc<Vec<BigComplex>>> {
    type Cache = Mutex<HashMap<(Disc, usize), Arc<Vec<BigComplex>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (disc.clone(), n);
    if let Some(hit) = cache.lock().expect("quadrature cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let mut m = FIRST_NODES;
    let mut previous = quadrature_values(disc, n, m, GATE_BITS + 16);
    loop {
        m *= 2;
        if m > MAX_NODES {
            return Err(Error::QuadratureNonconvergence(format!("Gaussian moments of {disc} at degree {n}")));
        }
        let current = quadrature_values(disc, n, m, GATE_BITS + 16);
        let change = worst_gap(&previous, &current, scales);
        if change < -f64::from(GATE_BITS) / 2.0 {
            let done = Arc::new(current);
            cache.lock().expect("quadrature cache poisoned").insert(key, done.clone());
            return Ok(done);
        }
        previous = current;
    }
}

fn worst_gap(a: &[BigComplex], b: &[BigComplex], scales: &[f64]) -> f64 {
    a.iter().zip(b).zip(scales).map(|((x, y), s)| (x - y).abs().log2_abs() - s).fold(f64::NEG_INFINITY, f64::max)
}

/// Quadrature must converge to 2^{−g/2} and agree with the series to
/// 2^{−g/4} (g = min(prec, GATE_BITS)), both in units of √(F_jj·F_kk).
fn quadrature_gate(disc: &Disc, raw: &[Vec<BigComplex>], prec: u32) -> Result<()> {
    let n = raw.len() - 1;
    let entries = gate_entries(n);
    let scales: Vec<f64> =
        entries.iter().map(|&(j, k)| 0.5 * (raw[j][j].re.log2_abs() + raw[k][k].re.log2_abs())).collect();
    let quadrature = converged_quadrature(disc, n, &scales)?;
    let series: Vec<BigComplex> = entries.iter().map(|&(j, k)| raw[j][k].clone()).collect();
    let gap = worst_gap(&series, &quadrature, &scales);
    if gap > -f64::from(prec.min(GATE_BITS)) / 4.0 {
        return Err(Error::Consistency(format!("series and quadrature disagree for {disc}: relative gap 2^{gap:.1}")));
    }
    Ok(())
}
