//! Two-sided counts for the eigenvalue clusters of the perturbed Landau
//! Hamiltonian H = H₀ + V around the lowest level, read off Toeplitz spectra.
//!
//! N((−∞,−λ); H) is squeezed between N((λ,∞); −T_V) and
//! N((λ,∞); −T_{V_ε^−}) + m, and N((λ,a); H) between N((λ,∞); T_{V_ε^−}) − m
//! and N((λ,∞); T_{V_ε^+}) + m, where V_ε^± = V ± ε|V| and m is a constant
//! the theory does not determine. Reports never subtract or add m.

use rug::Rational;
use serde::Serialize;

use crate::asymptotics::counting_law;
use crate::bigarith::{BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::symbols::{hulls_disjoint, rational_to_decimal, Symbol};
use crate::toeplitz::{truncation_spectrum, Rung, Side};

/// Magnetic field strength; the first Landau level sits at B = 2.
pub const FIELD: u32 = 2;

#[derive(Clone, Debug, Serialize)]
pub struct ClusterRow {
    pub lambda: String,
    /// N((λ,∞); −T_V)
    pub negative_lower: usize,
    /// N((λ,∞); −T_{V_ε^−}), before adding m
    pub negative_upper: usize,
    /// N((λ,∞); T_{V_ε^−}), before subtracting m
    pub positive_lower: usize,
    /// N((λ,∞); T_{V_ε^+}), before adding m
    pub positive_upper: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterReport {
    pub epsilon: String,
    pub a: String,
    pub degree: usize,
    /// τ(N) for T_V, T_{V_ε^+}, T_{V_ε^−}
    pub tails: [String; 3],
    pub rows: Vec<ClusterRow>,
    /// Every upper bound is "+ m" and the positive lower bound is "− m".
    pub unknown_constant: &'static str,
}

fn check_parameters(epsilon: &Rational, a: &Rational) -> Result<()> {
    if epsilon.cmp0().is_le() || *epsilon >= 1 {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {}", rational_to_decimal(epsilon))));
    }
    if a.cmp0().is_le() || *a >= FIELD {
        return Err(Error::Domain(format!("a must lie in (0, {FIELD}), got {}", rational_to_decimal(a))));
    }
    Ok(())
}

struct Spectra {
    base: Rung,
    plus: Rung,
    minus: Rung,
}

fn spectra(symbol: &Symbol, epsilon: &Rational, degree: usize, ctx: &PrecisionContext) -> Result<Spectra> {
    let (tilt_plus, tilt_minus) = symbol.epsilon_tilt(epsilon)?;
    Ok(Spectra {
        base: truncation_spectrum(symbol, degree, ctx)?,
        plus: truncation_spectrum(&tilt_plus, degree, ctx)?,
        minus: truncation_spectrum(&tilt_minus, degree, ctx)?,
    })
}

fn report(s: &Spectra, epsilon: &Rational, a: &Rational, lambdas: &[BigReal]) -> Result<ClusterReport> {
    let rows = lambdas
        .iter()
        .map(|lambda| {
            Ok(ClusterRow {
                lambda: lambda.to_decimal_string(),
                negative_lower: s.base.count(lambda, Side::Minus)?,
                negative_upper: s.minus.count(lambda, Side::Minus)?,
                positive_lower: s.minus.count(lambda, Side::Plus)?,
                positive_upper: s.plus.count(lambda, Side::Plus)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ClusterReport {
        epsilon: rational_to_decimal(epsilon),
        a: rational_to_decimal(a),
        degree: s.base.degree,
        tails: [&s.base, &s.plus, &s.minus].map(|r| r.tail.value.to_decimal_digits(20)),
        rows,
        unknown_constant: "upper bounds hold up to + m and the positive lower bound up to - m, m unknown",
    })
}

/// Cluster bounds at every λ of the grid, from truncations of degree `degree`.
pub fn cluster_bounds(
    symbol: &Symbol,
    epsilon: &Rational,
    a: &Rational,
    lambdas: &[BigReal],
    degree: usize,
    ctx: &PrecisionContext,
) -> Result<ClusterReport> {
    check_parameters(epsilon, a)?;
    report(&spectra(symbol, epsilon, degree, ctx)?, epsilon, a, lambdas)
}

#[derive(Clone, Debug, Serialize)]
pub struct SideGrowth {
    /// Least-squares slope through the origin of counts against |log λ|/log|log λ|.
    pub c: f64,
    pub counts: Vec<usize>,
    pub growing: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterGrowth {
    pub report: ClusterReport,
    /// None when V ≥ 0: there is no negative cluster.
    pub negative: Option<SideGrowth>,
    pub positive: Option<SideGrowth>,
}

fn side_growth(counts: Vec<usize>, laws: &[f64]) -> SideGrowth {
    let num: f64 = counts.iter().zip(laws).map(|(c, l)| *c as f64 * l).sum();
    let den: f64 = laws.iter().map(|l| l * l).sum();
    let growing = counts.windows(2).all(|w| w[0] <= w[1]) && counts.first() < counts.last();
    SideGrowth { c: num / den, counts, growing }
}

/// Fits the growth of both lower-bound profiles along a decreasing λ grid.
pub fn cluster_growth_check(
    symbol: &Symbol,
    epsilon: &Rational,
    a: &Rational,
    lambdas: &[BigReal],
    degree: usize,
    ctx: &PrecisionContext,
) -> Result<ClusterGrowth> {
    check_parameters(epsilon, a)?;
    if lambdas.len() < 2 || lambdas.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Precondition("λ grid must have two or more strictly decreasing values".into()));
    }
    let parts = symbol.decompose()?;
    let has_plus = !parts.positive_support.is_empty();
    let has_minus = !parts.negative_support.is_empty();
    if has_plus && has_minus && !hulls_disjoint(&parts.positive_support, &parts.negative_support, ctx.bits()).separated {
        return Err(Error::Precondition("hulls of supp V₊ and supp V₋ are not certified disjoint".into()));
    }
    let report = cluster_bounds(symbol, epsilon, a, lambdas, degree, ctx)?;
    let laws: Vec<f64> = lambdas.iter().map(counting_law).collect::<Result<_>>()?;
    let negative = has_minus.then(|| side_growth(report.rows.iter().map(|r| r.negative_lower).collect(), &laws));
    let positive = has_plus.then(|| side_growth(report.rows.iter().map(|r| r.positive_lower).collect(), &laws));
    Ok(ClusterGrowth { report, negative, positive })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(exponents: &[i32], prec: u32) -> Vec<BigReal> {
        exponents.iter().map(|e| BigReal::parse(&format!("1e{e}"), prec).unwrap()).collect()
    }

    #[test]
    fn bounds_are_ordered_and_echo_parameters() {
        let v = Symbol::from_decimal_terms(&[["-2", "0", "1", "1"], ["2", "0", "1", "-1"]]).unwrap();
        let ctx = PrecisionContext::for_dimension(41);
        let eps = Rational::from((1, 10));
        let a = Rational::from(1);
        let report = cluster_bounds(&v, &eps, &a, &grid(&[-2, -4, -6, -8], ctx.bits()), 40, &ctx).unwrap();
        assert_eq!((report.epsilon.as_str(), report.a.as_str()), ("0.1", "1"));
        for r in &report.rows {
            assert!(r.negative_lower <= r.negative_upper && r.positive_lower <= r.positive_upper, "{r:?}");
        }
        assert!(report.rows.last().unwrap().negative_lower > 0);
        assert!(cluster_bounds(&v, &eps, &Rational::from(2), &[], 10, &ctx).is_err());
        assert!(cluster_bounds(&v, &Rational::from(1), &a, &[], 10, &ctx).is_err());
    }

    #[test]
    fn nonnegative_symbol_has_no_negative_cluster() {
        let v = Symbol::from_decimal_terms(&[["0", "0", "1", "2"]]).unwrap();
        let ctx = PrecisionContext::for_dimension(31);
        let g = cluster_growth_check(&v, &Rational::from((1, 5)), &Rational::from(1), &grid(&[-3, -6, -9, -12], ctx.bits()), 30, &ctx)
            .unwrap();
        assert!(g.negative.is_none());
        assert!(g.report.rows.iter().all(|r| r.negative_lower == 0 && r.negative_upper == 0));
        let positive = g.positive.unwrap();
        assert!(positive.growing && positive.c > 0.0);
    }

    #[test]
    fn tilt_is_monotone_in_epsilon() {
        let v = Symbol::from_decimal_terms(&[["0", "0", "1", "1"], ["2", "0", "0.5", "-1"]]).unwrap();
        let ctx = PrecisionContext::for_dimension(31);
        let lambdas = grid(&[-2, -4, -6], ctx.bits());
        let small = cluster_bounds(&v, &Rational::from((1, 10)), &Rational::from(1), &lambdas, 30, &ctx).unwrap();
        let large = cluster_bounds(&v, &Rational::from((1, 2)), &Rational::from(1), &lambdas, 30, &ctx).unwrap();
        for (s, l) in small.rows.iter().zip(&large.rows) {
            assert!(s.positive_upper <= l.positive_upper && s.negative_upper <= l.negative_upper);
        }
    }
}
