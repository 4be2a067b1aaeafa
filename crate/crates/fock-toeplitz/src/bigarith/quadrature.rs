//! Gauss–Legendre rules at arbitrary precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::real::BigReal;

/// Nodes and weights on [−1, 1], nodes ascending.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<BigReal>,
    pub weights: Vec<BigReal>,
}

type Cache = Mutex<HashMap<(usize, u32), Arc<GaussLegendre>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached `m`-point rule at `prec` bits.
pub fn gauss_legendre(m: usize, prec: u32) -> Arc<GaussLegendre> {
    if let Some(rule) = cache().lock().expect("quadrature cache poisoned").get(&(m, prec)) {
        return rule.clone();
    }
    let rule = Arc::new(compute(m, prec));
    cache().lock().expect("quadrature cache poisoned").insert((m, prec), rule.clone());
    rule
}

/// (P_m(x), P_{m−1}(x)) by the three-term recurrence.
fn legendre_pair(m: usize, x: &BigReal) -> (BigReal, BigReal) {
    let prec = x.prec();
    let mut prev = BigReal::one(prec);
    let mut cur = x.clone();
    if m == 0 {
        return (prev, BigReal::zero(prec));
    }
    for k in 1..m {
        let k64 = k as u64;
        let next = ((x * &cur).mul_u64(2 * k64 + 1) - prev.mul_u64(k64)).div_u64(k64 + 1);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn compute(m: usize, prec: u32) -> GaussLegendre {
    assert!(m >= 1);
    let work = prec + 16;
    let one = BigReal::one(work);
    let tol = -(work as f64) + 4.0;
    let half = m.div_ceil(2);
    let mut pos_nodes = Vec::with_capacity(half);
    let mut pos_weights = Vec::with_capacity(half);
    for i in 0..half {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut x = BigReal::from_f64(guess, work);
        let mut deriv;
        let mut iters = 0;
        loop {
            let (p, q) = legendre_pair(m, &x);
            let xx = x.square();
            // P'_m = m (x P_m − P_{m−1}) / (x² − 1)
            deriv = (&x * &p - &q).mul_u64(m as u64) / (&xx - &one);
            let dx = &p / &deriv;
            x -= &dx;
            iters += 1;
            if dx.is_zero() || dx.log2_abs() < tol || iters > 200 {
                let (p, q) = legendre_pair(m, &x);
                deriv = (&x * &p - &q).mul_u64(m as u64) / (&x.square() - &one);
                break;
            }
        }
        let w = BigReal::from_u64(2, work) / ((&one - &x.square()) * deriv.square());
        pos_nodes.push(x);
        pos_weights.push(w);
    }
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    // guesses run from the largest node downward
    for i in 0..m / 2 {
        nodes.push(-&pos_nodes[i]);
        weights.push(pos_weights[i].clone());
    }
    if m % 2 == 1 {
        nodes.push(BigReal::zero(work));
        weights.push(pos_weights[half - 1].clone());
    }
    for i in (0..m / 2).rev() {
        nodes.push(pos_nodes[i].clone());
        weights.push(pos_weights[i].clone());
    }
    GaussLegendre {
        nodes: nodes.iter().map(|x| x.with_prec(prec)).collect(),
        weights: weights.iter().map(|x| x.with_prec(prec)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = gauss_legendre(12, 256);
        // ∫ x^22 dx over [-1,1] = 2/23
        let mut acc = BigReal::zero(256);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += &(w * &x.powu(22));
        }
        let exact = BigReal::from_u64(2, 256).div_u64(23);
        assert!(acc.rel_diff(&exact, &BigReal::zero(256)).log2_abs() < -245.0);
    }

    #[test]
    fn weights_sum_to_two_and_nodes_ascend() {
        for m in [1usize, 2, 7, 32] {
            let rule = gauss_legendre(m, 200);
            let total = rule.weights.iter().fold(BigReal::zero(200), |a, w| a + w);
            assert!((total - BigReal::from_u64(2, 200)).abs().log2_abs() < -190.0);
            assert!(rule.nodes.windows(2).all(|p| p[0] < p[1]));
        }
    }
}
