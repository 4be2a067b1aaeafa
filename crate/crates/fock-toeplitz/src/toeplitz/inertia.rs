//! Sign structure of the form g ↦ ∫ W|g|² e^{−|z|²} dm on polynomials of
//! degree ≤ n, in three bases.

use rug::Rational;
use serde::Serialize;

use crate::bigarith::{cholesky, default_zero_threshold, gauss_legendre, ldlt_inertia, whiten_with, BigComplex, BigReal, HermitianMatrix, InertiaTriple, PrecisionContext};
use crate::error::{Error, Result};
use crate::moments::{gram_matrix, weighted_moment_matrix, Weight};
use crate::symbols::{Disc, Point, RegionSet, Symbol};

/// Inertia of the Gaussian-weighted moment form in the monomial basis.
/// n_minus bounds the number of negative eigenvalues of T_V from below.
pub fn inertia_criterion(symbol: &Symbol, n: usize, ctx: &PrecisionContext) -> Result<InertiaTriple> {
    let q = weighted_moment_matrix(symbol, n, Weight::Gaussian, ctx.bits())?.into_matrix();
    Ok(ldlt_inertia(&q, &default_zero_threshold(&q, ctx.bits())))
}

/// Same form after whitening by the area Gram of supp V₊ (or of supp V when
/// V ≤ 0). Sylvester's law makes this equal to [`inertia_criterion`].
pub fn whitened_inertia(symbol: &Symbol, n: usize, ctx: &PrecisionContext) -> Result<InertiaTriple> {
    let decomposition = symbol.decompose()?;
    let region = if decomposition.positive_support.is_empty() {
        RegionSet::union_of(&symbol.discs().cloned().collect::<Vec<_>>())?
    } else {
        decomposition.positive_support
    };
    for factor in [2, 4] {
        let prec = ctx.bits() * factor;
        let gram = gram_matrix(&region, n, prec)?.into_matrix();
        let Ok(l) = cholesky(&gram) else { continue };
        let q = weighted_moment_matrix(symbol, n, Weight::Gaussian, prec)?.into_matrix();
        let w = whiten_with(&q, &l).with_prec(ctx.bits());
        return Ok(ldlt_inertia(&w, &default_zero_threshold(&w, ctx.bits())));
    }
    Err(Error::IllConditioned { degree: n, bits: ctx.bits() * 4 })
}

const MOBIUS_BITS: u32 = 256;
const MOBIUS_START_NODES: usize = 32;
const MOBIUS_MAX_NODES: usize = 512;
/// Node doubling stops once entries move by less than this (log2, relative
/// to the trace of the |V| form, which survives cancellation in V). Pivots
/// within 2^16 of that accuracy count as zero on the transported side.
const MOBIUS_TOLERANCE_LOG2: i32 = -90;

#[derive(Clone, Debug, Serialize)]
pub struct MobiusReport {
    pub degree: usize,
    pub pole: (f64, f64),
    pub direct: InertiaTriple,
    /// None when the quadrature did not converge.
    pub transported: Option<InertiaTriple>,
    pub nodes: usize,
    pub matches: bool,
}

/// Image of D_r(a) under w = 1/(z − p), for p outside the closed disc.
fn image_disc(disc: &Disc, pole: &Point) -> Result<Disc> {
    let bx = Rational::from(&disc.center().x - &pole.x);
    let by = Rational::from(&disc.center().y - &pole.y);
    let denom = Rational::from(&bx * &bx) + Rational::from(&by * &by) - disc.radius_sq();
    let center = Point::new(Rational::from(&bx / &denom), Rational::from(-by / &denom));
    Disc::new(center, Rational::from(disc.radius() / &denom))
}

/// Gauss–Legendre in the radius, trapezoid in the angle (the integrand is
/// periodic there).
fn periodic_polar_nodes(disc: &Disc, nodes: usize, prec: u32, mut f: impl FnMut(&BigComplex, &BigReal)) {
    let rule = gauss_legendre(nodes, prec);
    let center = disc.center().to_complex(prec);
    let half_r = disc.radius_real(prec).div_u64(2);
    let one = BigReal::one(prec);
    let step = BigReal::pi(prec).mul_u64(2).div_u64(nodes as u64);
    let units: Vec<BigComplex> = (0..nodes).map(|k| BigComplex::from_polar(&one, &step.mul_u64(k as u64))).collect();
    for (x, wr) in rule.nodes.iter().zip(&rule.weights) {
        let rho = &half_r * &(x + &one);
        let w = wr * &half_r * &rho * &step;
        for u in &units {
            f(&(&center + &u.scale(&rho)), &w);
        }
    }
}

/// Form matrix of z^j∘φ^{-1} against the pushforward measure, φ(z) = 1/(z − p),
/// with the trace of the same form for |V|.
fn transported_matrix(symbol: &Symbol, pole: &Point, n: usize, nodes: usize) -> Result<(HermitianMatrix, BigReal)> {
    let prec = MOBIUS_BITS + 16;
    let p = pole.to_complex(prec);
    let mut acc = vec![vec![BigComplex::zero(prec); n + 1]; n + 1];
    let mut trace = BigReal::zero(prec);
    for term in symbol.terms() {
        let image = image_disc(&term.disc, pole)?;
        let weight = BigReal::from_rational(&term.weight, prec);
        periodic_polar_nodes(&image, nodes, prec, |w, node_weight| {
            let wr = w.recip();
            let z = &p + &wr;
            // |dz/dw|² = |w|^{-4}
            let jac = wr.norm_sqr().square();
            let scale = (-z.norm_sqr()).exp() * jac * node_weight * &weight;
            let powers = z.powers(n);
            let conj: Vec<BigComplex> = powers.iter().map(BigComplex::conj).collect();
            let magnitude = scale.abs();
            for zj in &powers {
                trace += &(&zj.norm_sqr() * &magnitude);
            }
            for (j, cj) in conj.iter().enumerate() {
                for (k, zk) in powers.iter().enumerate().skip(j) {
                    acc[j][k] += &(zk * cj).scale(&scale);
                }
            }
        });
    }
    Ok((HermitianMatrix::from_upper_fn(n + 1, |j, k| acc[j][k].with_prec(MOBIUS_BITS)), trace.with_prec(MOBIUS_BITS)))
}

fn max_change(a: &HermitianMatrix, b: &HermitianMatrix, scale: &BigReal) -> f64 {
    let n = a.dim();
    (0..n)
        .flat_map(|j| (j..n).map(move |k| (j, k)))
        .map(|(j, k)| (&a.get(j, k) - &b.get(j, k)).abs().log2_abs())
        .fold(f64::NEG_INFINITY, f64::max)
        - scale.log2_abs()
}

/// Compares [`inertia_criterion`] with the inertia of the same form written
/// in the coordinate w = 1/(z − pole), evaluated by quadrature.
pub fn mobius_inertia_crosscheck(symbol: &Symbol, pole: &Point, n: usize, ctx: &PrecisionContext) -> Result<MobiusReport> {
    if let Some(d) = symbol.discs().find(|d| d.center().dist_sq(pole) <= d.radius_sq()) {
        return Err(Error::Precondition(format!("pole {pole} lies in the closed disc {d}")));
    }
    let direct = inertia_criterion(symbol, n, ctx)?;
    let mut nodes = MOBIUS_START_NODES;
    let (mut previous, _) = transported_matrix(symbol, pole, n, nodes)?;
    let mut transported = None;
    while nodes < MOBIUS_MAX_NODES {
        nodes *= 2;
        let (next, scale) = transported_matrix(symbol, pole, n, nodes)?;
        let change = max_change(&next, &previous, &scale);
        previous = next;
        if change < f64::from(MOBIUS_TOLERANCE_LOG2) {
            let zero = BigReal::pow2(MOBIUS_TOLERANCE_LOG2 + 16, MOBIUS_BITS) * scale;
            transported = Some(ldlt_inertia(&previous, &zero));
            break;
        }
    }
    Ok(MobiusReport {
        degree: n,
        pole: pole.to_f64(),
        direct,
        matches: transported == Some(direct),
        transported,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(rows: &[[&str; 4]]) -> Symbol {
        Symbol::from_decimal_terms(rows).unwrap()
    }

    fn triple(n_plus: usize, n_zero: usize, n_minus: usize) -> InertiaTriple {
        InertiaTriple { n_plus, n_zero, n_minus }
    }

    #[test]
    fn positive_symbol() {
        let ctx = PrecisionContext::new(256).unwrap();
        let unit = sym(&[["0", "0", "1", "1"]]);
        assert_eq!(inertia_criterion(&unit, 1, &ctx).unwrap(), triple(2, 0, 0));
        let report = mobius_inertia_crosscheck(&unit, &Point::new(3, 1), 3, &ctx).unwrap();
        assert_eq!(report.transported, Some(triple(4, 0, 0)));
        assert!(report.matches);
    }

    #[test]
    fn degree_zero_value_is_preserved() {
        let v = sym(&[["0", "0", "1", "1"], ["0.5", "0", "0.25", "-3"]]);
        let pole = Point::new(-3, 0);
        let direct = weighted_moment_matrix(&v, 0, Weight::Gaussian, 256).unwrap().get(0, 0).re;
        let moved = transported_matrix(&v, &pole, 0, 128).unwrap().0.get(0, 0).re;
        assert!((&direct - &moved).abs().log2_abs() < direct.log2_abs() - 100.0);
    }

    #[test]
    fn bases_agree_for_mixed_symbol() {
        let v = sym(&[["0", "0", "1", "1"], ["0.65", "0", "0.3", "-2"]]);
        let ctx = PrecisionContext::for_dimension(11);
        for n in [2, 5, 10] {
            assert_eq!(inertia_criterion(&v, n, &ctx).unwrap(), whitened_inertia(&v, n, &ctx).unwrap());
        }
        let report = mobius_inertia_crosscheck(&v, &Point::new(-3, 0), 6, &ctx).unwrap();
        assert!(report.matches, "{report:?}");
    }

    #[test]
    fn cancelling_form_is_singular_in_both_bases() {
        let pair = sym(&[["-2", "0", "1", "1"], ["2", "0", "1", "-1"]]);
        let ctx = PrecisionContext::new(256).unwrap();
        let report = mobius_inertia_crosscheck(&pair, &Point::new(0, 3), 0, &ctx).unwrap();
        assert_eq!(report.transported, Some(triple(0, 1, 0)));
    }

    #[test]
    fn pole_inside_support_is_rejected() {
        let unit = sym(&[["0", "0", "1", "1"]]);
        let ctx = PrecisionContext::new(192).unwrap();
        assert!(matches!(mobius_inertia_crosscheck(&unit, &Point::new(1, 0), 2, &ctx), Err(Error::Precondition(_))));
    }
}
