use crate::bigarith::{gauss_legendre, BigComplex, BigReal};
use crate::symbols::Disc;

/// Tensor Gauss–Legendre rule in polar coordinates about the disc center:
/// calls `f(z, w)` for each node z with weight w (Jacobian ρ included), so
/// that Σ w·g(z) ≈ ∫_D g dm.
pub fn polar_nodes(disc: &Disc, radial: usize, angular: usize, prec: u32, f: impl FnMut(&BigComplex, &BigReal)) {
    nodes_impl(disc, radial, angular, prec, false, f)
}

/// Upper half-plane nodes (about the center) with doubled weights. For a disc
/// centered on the real axis and an integrand with g(z̄) = conj(g(z)), the
/// real part of the sum equals the full rule. `angular` must be even.
pub(crate) fn polar_nodes_upper(disc: &Disc, radial: usize, angular: usize, prec: u32, f: impl FnMut(&BigComplex, &BigReal)) {
    debug_assert!(angular % 2 == 0);
    nodes_impl(disc, radial, angular, prec, true, f)
}

fn nodes_impl(disc: &Disc, radial: usize, angular: usize, prec: u32, upper: bool, mut f: impl FnMut(&BigComplex, &BigReal)) {
    let rule_r = gauss_legendre(radial, prec);
    let rule_t = gauss_legendre(angular, prec);
    let center = disc.center().to_complex(prec);
    let r = disc.radius_real(prec);
    let half_r = r.div_u64(2);
    let pi = BigReal::pi(prec);
    let one = BigReal::one(prec);
    // angles and their unit vectors are shared by every radius
    let units: Vec<(BigComplex, BigReal)> = rule_t
        .nodes
        .iter()
        .zip(&rule_t.weights)
        .filter(|(x, _)| !upper || x.is_negative())
        .map(|(x, w)| {
            let theta = &pi * &(x + &one);
            let w = if upper { w.mul_u64(2) } else { w.clone() };
            (BigComplex::from_polar(&one, &theta), w * &pi)
        })
        .collect();
    for (x, wr) in rule_r.nodes.iter().zip(&rule_r.weights) {
        let rho = &half_r * &(x + &one);
        let wrho = wr * &half_r * &rho;
        for (u, wt) in &units {
            let z = &center + &u.scale(&rho);
            f(&z, &(&wrho * wt));
        }
    }
}
