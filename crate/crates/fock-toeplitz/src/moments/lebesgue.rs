use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::binomial::binomial_rows;
use crate::bigarith::{BigComplex, BigReal};
use crate::symbols::Disc;

const GUARD: u32 = 16;

/// ∫_{D_r(a)} z^j z̄^k dm by the binomial closed form. For fixed (j, k) every
/// term carries the phase of a^{j−k}, so there is no cancellation.
pub fn lebesgue_moment(disc: &Disc, j: usize, k: usize, prec: u32) -> BigComplex {
    let work = prec + GUARD;
    let a = disc.center().to_complex(work);
    let r2 = BigReal::from_rational(&disc.radius_sq(), work);
    let pi = BigReal::pi(work);
    let rows = binomial_rows(j.max(k), work);
    let mut sum = BigComplex::zero(work);
    for p in 0..=j.min(k) {
        let radial = (&pi * &r2.powu(p as u32 + 1)).div_u64(p as u64 + 1);
        let coeff = &rows[j][p] * &rows[k][p] * radial;
        let term = &a.powu((j - p) as u32) * &a.conj().powu((k - p) as u32);
        sum += &term.scale(&coeff);
    }
    sum.with_prec(prec)
}

/// Full block L[j][k] = ∫ z^j z̄^k dm for 0 ≤ j, k ≤ n.
pub(crate) fn lebesgue_block(disc: &Disc, n: usize, prec: u32) -> Arc<Vec<Vec<BigComplex>>> {
    type Cache = Mutex<HashMap<(Disc, usize, u32), Arc<Vec<Vec<BigComplex>>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (disc.clone(), n, prec);
    if let Some(hit) = cache.lock().expect("moment cache poisoned").get(&key) {
        return hit.clone();
    }
    let block = Arc::new(compute_block(disc, n, prec));
    cache.lock().expect("moment cache poisoned").insert(key, block.clone());
    block
}

fn compute_block(disc: &Disc, n: usize, prec: u32) -> Vec<Vec<BigComplex>> {
    let work = prec + GUARD;
    let a = disc.center().to_complex(work);
    let r2 = BigReal::from_rational(&disc.radius_sq(), work);
    let pi = BigReal::pi(work);
    let rows = binomial_rows(n, work);
    let apow = a.powers(n + 1);
    // left[j][p] = C(j,p)·a^{j−p}; right[k][p] = conj(left[k][p])·π r^{2p+2}/(p+1)
    let left: Vec<Vec<BigComplex>> = (0..=n).map(|j| (0..=j).map(|p| apow[j - p].scale(&rows[j][p])).collect()).collect();
    let mut radial = Vec::with_capacity(n + 1);
    let mut rpow = r2.clone();
    for p in 0..=n {
        radial.push((&pi * &rpow).div_u64(p as u64 + 1));
        rpow = &rpow * &r2;
    }
    let right: Vec<Vec<BigComplex>> =
        left.iter().map(|row| row.iter().zip(&radial).map(|(x, c)| x.conj().scale(c)).collect()).collect();
    let mut out = vec![vec![BigComplex::zero(prec); n + 1]; n + 1];
    for j in 0..=n {
        for k in j..=n {
            let mut sum = BigComplex::zero(work);
            for p in 0..=j {
                sum += &(&left[j][p] * &right[k][p]);
            }
            out[k][j] = sum.conj().with_prec(prec);
            out[j][k] = sum.with_prec(prec);
        }
    }
    out
}
