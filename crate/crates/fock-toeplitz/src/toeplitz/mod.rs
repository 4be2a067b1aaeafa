//! Spectra of Fock-basis truncations T̂_N(V), tail certification and the
//! counting profiles built on them.
//!
//! An eigenvalue of the truncation is *certified* when its magnitude exceeds
//! 2τ(N), with τ(N) = sup|V|·R^{2N+2}/(N+1)! bounding the form of T_|V| on
//! z^{N+1}F².

mod inertia;

use serde::Serialize;

pub use inertia::{inertia_criterion, mobius_inertia_crosscheck, whitened_inertia, MobiusReport};

use crate::bigarith::{factorial, hermitian_eigenvalues, BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::moments::toeplitz_truncation;
use crate::symbols::Symbol;

pub const DEFAULT_LADDER: [usize; 7] = [10, 15, 20, 25, 30, 35, 40];
/// τ must fall by this factor after the count's last change for a plateau.
pub const PLATEAU_TAIL_DROP: f64 = 1e6;
pub const PLATEAU_RUNGS: usize = 3;

/// τ(N) = sup|V|·R^{2N+2}/(N+1)! with R the largest modulus on supp V.
#[derive(Clone, Debug)]
pub struct TailBound {
    pub degree: usize,
    pub radius: BigReal,
    pub value: BigReal,
}

impl TailBound {
    /// Eigenvalues above this are certified.
    pub fn threshold(&self) -> BigReal {
        self.value.mul_u64(2)
    }
}

pub fn tail_bound(symbol: &Symbol, degree: usize, prec: u32) -> TailBound {
    let radius = symbol.support_radius(prec);
    let sup = BigReal::from_rational(&symbol.sup_abs(), prec);
    let value = sup * radius.powu(2 * degree as u32 + 2) / factorial(degree as u32 + 1, prec);
    TailBound { degree, radius, value }
}

/// Which part of the spectrum a count refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// N((λ,∞); T_V)
    Plus,
    /// N((λ,∞); −T_V)
    Minus,
    /// N((λ,∞); |T_V|)
    Abs,
}

/// One truncation degree of a spectrum series.
#[derive(Clone, Debug)]
pub struct Rung {
    pub degree: usize,
    pub tail: TailBound,
    /// Eigenvalues at most this large in modulus are roundoff and belong to
    /// neither sign list.
    pub noise_floor: BigReal,
    /// All eigenvalues of T̂_N, ascending.
    pub eigenvalues: Vec<BigReal>,
}

impl Rung {
    /// Positive eigenvalues, descending.
    pub fn lambda_plus(&self) -> Vec<BigReal> {
        self.eigenvalues.iter().rev().filter(|v| *v > &self.noise_floor).cloned().collect()
    }

    /// Magnitudes of the negative eigenvalues, descending.
    pub fn lambda_minus(&self) -> Vec<BigReal> {
        self.eigenvalues.iter().map(|v| -v).take_while(|v| *v > self.noise_floor).collect()
    }

    /// Moduli of all nonzero eigenvalues, descending.
    pub fn singular_values(&self) -> Vec<BigReal> {
        let mut s: Vec<BigReal> = self.eigenvalues.iter().map(BigReal::abs).filter(|v| *v > self.noise_floor).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    fn above(values: Vec<BigReal>, floor: &BigReal) -> Vec<BigReal> {
        values.into_iter().take_while(|v| v > floor).collect()
    }

    pub fn certified_plus(&self) -> Vec<BigReal> {
        Self::above(self.lambda_plus(), &self.tail.threshold())
    }

    pub fn certified_minus(&self) -> Vec<BigReal> {
        Self::above(self.lambda_minus(), &self.tail.threshold())
    }

    pub fn certified_singular(&self) -> Vec<BigReal> {
        Self::above(self.singular_values(), &self.tail.threshold())
    }

    /// N((λ,∞); ±T_V or |T_V|); λ must clear the certification threshold.
    pub fn count(&self, lambda: &BigReal, side: Side) -> Result<usize> {
        let threshold = self.tail.threshold();
        if *lambda <= threshold {
            return Err(Error::Uncertified { lambda: lambda.to_f64(), tau: self.tail.value.to_f64() });
        }
        let values = match side {
            Side::Plus => self.lambda_plus(),
            Side::Minus => self.lambda_minus(),
            Side::Abs => self.singular_values(),
        };
        Ok(values.iter().filter(|v| *v > lambda).count())
    }
}

/// Truncation spectra along a ladder of degrees.
#[derive(Clone, Debug)]
pub struct SpectrumSeries {
    pub symbol: Symbol,
    pub bits: u32,
    pub rungs: Vec<Rung>,
}

impl SpectrumSeries {
    pub fn top(&self) -> &Rung {
        self.rungs.last().expect("series has at least one rung")
    }

    pub fn ladder(&self) -> Vec<usize> {
        self.rungs.iter().map(|r| r.degree).collect()
    }
}

fn check_ladder(ladder: &[usize]) -> Result<()> {
    if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("degree ladder must be nonempty and strictly increasing".into()));
    }
    Ok(())
}

/// Sign of the weight on the smallest disc (ties by |weight|).
fn canonical_sign(symbol: &Symbol) -> bool {
    symbol
        .terms()
        .iter()
        .min_by(|a, b| a.disc.cmp(&b.disc).then_with(|| a.weight.clone().abs().cmp(&b.weight.clone().abs())))
        .is_none_or(|t| t.weight.cmp0().is_gt())
}

/// Spectrum at one degree.
pub fn truncation_spectrum(symbol: &Symbol, degree: usize, ctx: &PrecisionContext) -> Result<Rung> {
    let matrix = toeplitz_truncation(symbol, degree, ctx.bits())?;
    // V and −V share one floating-point path, so their spectra are exact negatives
    let eigenvalues = if canonical_sign(symbol) {
        hermitian_eigenvalues(matrix.matrix(), ctx)?
    } else {
        hermitian_eigenvalues(&matrix.matrix().neg(), ctx)?.iter().rev().map(|v| -v).collect()
    };
    let sup = BigReal::from_rational(&symbol.sup_abs(), ctx.bits());
    let slack = &sup * &ctx.tolerance(2);
    if let Some(v) = eigenvalues.iter().find(|v| v.abs() > &sup + &slack) {
        return Err(Error::Consistency(format!(
            "eigenvalue {} exceeds sup|V| = {}",
            v.to_decimal_digits(12),
            sup.to_decimal_digits(12)
        )));
    }
    let noise_floor = sup.mul_pow2(32 - ctx.bits() as i32);
    Ok(Rung { degree, tail: tail_bound(symbol, degree, ctx.bits()), noise_floor, eigenvalues })
}

/// Spectra for each rung of `ladder` (strictly increasing, top ≥ 5).
pub fn spectrum_series(symbol: &Symbol, ladder: &[usize], ctx: &PrecisionContext) -> Result<SpectrumSeries> {
    check_ladder(ladder)?;
    if *ladder.last().expect("checked") < 5 {
        return Err(Error::Precondition("spectrum series needs a top degree of at least 5".into()));
    }
    let rungs = ladder.iter().map(|&n| truncation_spectrum(symbol, n, ctx)).collect::<Result<_>>()?;
    Ok(SpectrumSeries { symbol: symbol.clone(), bits: ctx.bits(), rungs })
}

/// N((λ,∞); ·) from the series' top rung.
pub fn counting_function(series: &SpectrumSeries, lambda: &BigReal, side: Side) -> Result<usize> {
    series.top().count(lambda, side)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderVerdict {
    Plateau,
    Growing,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountRow {
    pub degree: usize,
    pub count: usize,
    pub tau: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NegativeProfile {
    pub rows: Vec<CountRow>,
    pub verdict: LadderVerdict,
}

/// Plateau: the last three counts agree and τ fell ≥ 10⁶× since the count
/// last changed. Growing: strictly increasing over the last three rungs.
pub fn classify_counts(rows: &[CountRow]) -> LadderVerdict {
    if rows.len() < PLATEAU_RUNGS {
        return LadderVerdict::Undetermined;
    }
    let tail = &rows[rows.len() - PLATEAU_RUNGS..];
    if tail.windows(2).all(|w| w[0].count < w[1].count) {
        return LadderVerdict::Growing;
    }
    let last = rows.last().expect("nonempty");
    if tail.iter().all(|r| r.count == last.count) {
        let since = rows.iter().rposition(|r| r.count != last.count).map_or(0, |i| i + 1);
        if rows[since].tau / last.tau >= PLATEAU_TAIL_DROP {
            return LadderVerdict::Plateau;
        }
    }
    LadderVerdict::Undetermined
}

/// Certified negative counts (eigenvalues below −2τ) per rung.
pub fn negative_count_profile(series: &SpectrumSeries) -> NegativeProfile {
    let rows: Vec<CountRow> = series
        .rungs
        .iter()
        .map(|r| CountRow { degree: r.degree, count: r.certified_minus().len(), tau: r.tail.value.to_f64() })
        .collect();
    let verdict = classify_counts(&rows);
    NegativeProfile { rows, verdict }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankVerdict {
    ConsistentWithInfiniteRank,
    Inconsistent,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankGrowth {
    pub rows: Vec<CountRow>,
    pub verdict: RankVerdict,
}

/// Certified nonzero counts must never decrease and must rise at least once.
pub fn rank_growth_check(series: &SpectrumSeries) -> RankGrowth {
    let rows: Vec<CountRow> = series
        .rungs
        .iter()
        .map(|r| CountRow { degree: r.degree, count: r.certified_singular().len(), tau: r.tail.value.to_f64() })
        .collect();
    let verdict = if rows.len() < 2 {
        RankVerdict::Undetermined
    } else if rows.windows(2).all(|w| w[0].count <= w[1].count) && rows.windows(2).any(|w| w[0].count < w[1].count) {
        RankVerdict::ConsistentWithInfiniteRank
    } else {
        RankVerdict::Inconsistent
    };
    RankGrowth { rows, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigarith::regularized_gamma_p;

    fn sym(rows: &[[&str; 4]]) -> Symbol {
        Symbol::from_decimal_terms(rows).unwrap()
    }

    #[test]
    fn tail_values() {
        let unit = sym(&[["0", "0", "1", "1"]]);
        let t = tail_bound(&unit, 10, 128);
        assert!((t.value.to_f64() - 1.0 / 39916800.0).abs() < 1e-20);
        let next = tail_bound(&unit, 11, 128);
        assert!((&t.value / &next.value).to_f64() - 12.0 < 1e-25);
    }

    #[test]
    fn radial_spectrum_and_counts() {
        let unit = sym(&[["0", "0", "1", "1"]]);
        let ctx = PrecisionContext::new(256).unwrap();
        let series = spectrum_series(&unit, &[5, 10], &ctx).unwrap();
        let top = series.top();
        let plus = top.lambda_plus();
        assert!(top.lambda_minus().is_empty());
        for (j, v) in plus.iter().enumerate() {
            let p = regularized_gamma_p(j as u32 + 1, &BigReal::one(256)).unwrap();
            assert!((v - &p).abs().log2_abs() < p.log2_abs() - 128.0);
        }
        let half = BigReal::from_f64(0.5, 256);
        assert_eq!(counting_function(&series, &half, Side::Plus).unwrap(), 1);
        assert_eq!(counting_function(&series, &BigReal::one(256), Side::Abs).unwrap(), 0);
        let tiny = BigReal::pow2(-200, 256);
        assert!(matches!(counting_function(&series, &tiny, Side::Plus), Err(Error::Uncertified { .. })));
    }

    #[test]
    fn sign_flip_swaps_lists() {
        let v = sym(&[["-2", "0", "1", "1"], ["2", "0", "1", "-1"]]);
        let ctx = PrecisionContext::new(320).unwrap();
        let a = truncation_spectrum(&v, 12, &ctx).unwrap();
        let b = truncation_spectrum(&v.negated(), 12, &ctx).unwrap();
        assert_eq!(a.lambda_plus(), b.lambda_minus());
        assert_eq!(a.lambda_minus(), b.lambda_plus());
        // odd dimension: the pair's symmetry forces a kernel vector
        assert_eq!(a.lambda_plus().len(), 6);
        let close = |x: &[BigReal], y: &[BigReal]| {
            x.len() == y.len() && x.iter().zip(y).all(|(p, q)| (p - q).abs().log2_abs() < p.log2_abs() - 150.0)
        };
        assert!(close(&a.lambda_plus(), &a.lambda_minus()));
    }

    #[test]
    fn verdicts() {
        let row = |degree, count, tau| CountRow { degree, count, tau };
        let flat = [row(10, 0, 1.0), row(20, 0, 1e-3), row(30, 0, 1e-7)];
        assert_eq!(classify_counts(&flat), LadderVerdict::Plateau);
        let late = [row(10, 1, 1.0), row(20, 2, 1e-3), row(30, 2, 1e-5), row(40, 2, 1e-8)];
        assert_eq!(classify_counts(&late), LadderVerdict::Undetermined);
        let up = [row(10, 1, 1.0), row(20, 2, 1e-3), row(30, 3, 1e-5)];
        assert_eq!(classify_counts(&up), LadderVerdict::Growing);
        assert_eq!(classify_counts(&up[..2]), LadderVerdict::Undetermined);
    }

    #[test]
    fn positive_symbol_has_no_negatives_and_growing_rank() {
        let v = sym(&[["0.5", "0", "1", "2"]]);
        let ctx = PrecisionContext::new(320).unwrap();
        let series = spectrum_series(&v, &[5, 10, 15], &ctx).unwrap();
        let neg = negative_count_profile(&series);
        assert!(neg.rows.iter().all(|r| r.count == 0));
        assert_eq!(neg.verdict, LadderVerdict::Plateau);
        assert_eq!(rank_growth_check(&series).verdict, RankVerdict::ConsistentWithInfiniteRank);
        let single = spectrum_series(&v, &[10], &ctx).unwrap();
        assert_eq!(rank_growth_check(&single).verdict, RankVerdict::Undetermined);
    }
}
