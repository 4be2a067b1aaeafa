use std::ops::RangeInclusive;

use serde::Serialize;

use super::{Interval, Pencil, PencilSpectrum};
use crate::bigarith::PrecisionContext;
use crate::error::{Error, Result};
use crate::symbols::{PotentialData, RegionSet};

pub const DEFAULT_MIDRANGE_SLACK: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileVerdict {
    Bounded,
    Growing,
}

/// Counts N((lo, hi); A_n^+) over a range of degrees.
#[derive(Clone, Debug, Serialize)]
pub struct CountingProfile {
    pub lo: f64,
    pub hi: f64,
    pub degrees: Vec<usize>,
    pub counts: Vec<usize>,
    pub boundary_warnings: Vec<usize>,
    pub slack: usize,
    pub verdict: ProfileVerdict,
}

impl CountingProfile {
    /// Largest count over degrees in `range`.
    pub fn max_over(&self, range: RangeInclusive<usize>) -> Option<usize> {
        self.degrees.iter().zip(&self.counts).filter(|(n, _)| range.contains(*n)).map(|(_, c)| *c).max()
    }
}

/// Midrange counts for n in `degrees`. Bounded when the upper half of the
/// range never exceeds the lower half's maximum by more than `slack`.
pub fn midrange_profile(
    omega_plus: &RegionSet,
    omega_minus: &RegionSet,
    lo: f64,
    hi: f64,
    degrees: RangeInclusive<usize>,
    slack: usize,
    ctx: &PrecisionContext,
) -> Result<CountingProfile> {
    let interval = Interval::from_f64(lo, hi, ctx.bits())?;
    if degrees.is_empty() {
        return Err(Error::Precondition("empty degree range".into()));
    }
    let pencil = Pencil::new(omega_plus, omega_minus, *degrees.end(), ctx)?;
    let mut counts = Vec::new();
    let mut boundary_warnings = Vec::new();
    for n in degrees.clone() {
        let c = pencil.spectrum(n)?.count(&interval);
        counts.push(c.count);
        if c.boundary_warning {
            boundary_warnings.push(n);
        }
    }
    let mid = (degrees.start() + degrees.end()) / 2;
    let mut profile = CountingProfile {
        lo,
        hi,
        degrees: degrees.clone().collect(),
        counts,
        boundary_warnings,
        slack,
        verdict: ProfileVerdict::Bounded,
    };
    let lower = profile.max_over(*degrees.start()..=mid).unwrap_or(0);
    let upper = profile.max_over(mid..=*degrees.end()).unwrap_or(0);
    if upper > lower + slack {
        profile.verdict = ProfileVerdict::Growing;
    }
    Ok(profile)
}

/// Trailing-window bounds for N((0,1); A_n^±)/n.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaEstimates {
    pub window: (usize, usize),
    pub lower_plus: f64,
    pub upper_plus: f64,
    pub lower_minus: f64,
    pub upper_minus: f64,
    /// |lower_minus + upper_plus − 1|
    pub residual_plus: f64,
    /// |lower_plus + upper_minus − 1|
    pub residual_minus: f64,
    pub near_unit_total: usize,
}

impl DeltaEstimates {
    /// 0 < lower ≤ upper < 1 on both sides.
    pub fn ordered(&self) -> bool {
        [(self.lower_plus, self.upper_plus), (self.lower_minus, self.upper_minus)]
            .iter()
            .all(|&(l, u)| 0.0 < l && l <= u && u < 1.0)
    }
}

/// Min and max of N((0,1); A_n^±)/n over the second half of `degrees`.
pub fn delta_estimates(
    omega_plus: &RegionSet,
    omega_minus: &RegionSet,
    degrees: RangeInclusive<usize>,
    ctx: &PrecisionContext,
) -> Result<DeltaEstimates> {
    if degrees.clone().count() < 10 {
        return Err(Error::Precondition("delta estimates need at least 10 degrees".into()));
    }
    let start = (*degrees.start() + *degrees.end()).div_ceil(2).max(1);
    let window = start..=*degrees.end();
    let pencil = Pencil::new(omega_plus, omega_minus, *degrees.end(), ctx)?;
    let spectra: Vec<PencilSpectrum> = window.clone().map(|n| pencil.spectrum(n)).collect::<Result<_>>()?;
    let ratios = |f: fn(&PencilSpectrum) -> usize| -> (f64, f64) {
        spectra.iter().map(|s| f(s) as f64 / s.degree as f64).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)))
    };
    // N((0,1); A^−) = N((1,∞); A^+)
    let (lower_plus, upper_plus) = ratios(PencilSpectrum::below_one);
    let (lower_minus, upper_minus) = ratios(PencilSpectrum::above_one);
    Ok(DeltaEstimates {
        window: (start, *degrees.end()),
        lower_plus,
        upper_plus,
        lower_minus,
        upper_minus,
        residual_plus: (lower_minus + upper_plus - 1.0).abs(),
        residual_minus: (lower_plus + upper_minus - 1.0).abs(),
        near_unit_total: spectra.iter().map(PencilSpectrum::near_unit).sum(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormBoundRow {
    pub degree: usize,
    pub log_norm: f64,
    pub log_bound: f64,
    pub holds: bool,
}

/// ‖A_n^+‖ ≤ e^{2b_+n} per degree, plus the fitted constant in the lower
/// growth ‖A_n^+‖ ≥ e^{2b_−n − c}.
#[derive(Clone, Debug, Serialize)]
pub struct NormBoundReport {
    pub rows: Vec<NormBoundRow>,
    pub lower_constant: f64,
    pub all_hold: bool,
}

/// Degrees below 5 are skipped: the bound is asymptotic.
pub fn norm_bound_check(
    omega_plus: &RegionSet,
    omega_minus: &RegionSet,
    potential: &PotentialData,
    degrees: RangeInclusive<usize>,
    ctx: &PrecisionContext,
) -> Result<NormBoundReport> {
    if potential.b_plus <= potential.a_plus {
        return Err(Error::Precondition("norm bound needs b_plus > a_plus".into()));
    }
    let first = (*degrees.start()).max(5);
    if first > *degrees.end() {
        return Err(Error::Precondition("norm bound window must reach degree 5".into()));
    }
    let pencil = Pencil::new(omega_plus, omega_minus, *degrees.end(), ctx)?;
    let b_plus = potential.b_plus.to_f64();
    let b_minus = potential.b_minus.to_f64();
    let mut rows = Vec::new();
    let mut lower_constant = f64::NEG_INFINITY;
    for n in first..=*degrees.end() {
        let log_norm = pencil.spectrum(n)?.largest().ln_abs_f64();
        let log_bound = 2.0 * b_plus * n as f64;
        rows.push(NormBoundRow { degree: n, log_norm, log_bound, holds: log_norm <= log_bound });
        lower_constant = lower_constant.max(2.0 * b_minus * n as f64 - log_norm);
    }
    let all_hold = rows.iter().all(|r| r.holds);
    Ok(NormBoundReport { rows, lower_constant, all_hold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{potential_constants, Disc};
    use rug::Rational;

    fn disc(x: f64, r: f64) -> RegionSet {
        RegionSet::disc(Disc::from_f64(x, 0.0, r).unwrap())
    }

    #[test]
    fn whole_half_line_is_growing() {
        let ctx = PrecisionContext::for_dimension(11);
        let p = midrange_profile(&disc(0.0, 1.0), &disc(4.0, 1.0), 0.0, f64::INFINITY, 0..=10, 2, &ctx).unwrap();
        assert_eq!(p.verdict, ProfileVerdict::Growing);
        assert!(p.degrees.iter().zip(&p.counts).all(|(n, c)| *c == n + 1));
        assert!(midrange_profile(&disc(0.0, 1.0), &disc(4.0, 1.0), 1.0, 1.0, 0..=3, 2, &ctx).is_err());
    }

    #[test]
    fn norm_bound_for_separated_discs() {
        let ctx = PrecisionContext::for_dimension(21);
        let (plus, minus) = (disc(0.0, 1.0), disc(4.0, 1.0));
        let (d_plus, d_minus) = (Disc::from_f64(0.0, 0.0, 1.0).unwrap(), Disc::from_f64(4.0, 0.0, 1.0).unwrap());
        let potential = potential_constants(&d_plus, &d_minus, &Rational::from((1, 20)), ctx.bits()).unwrap();
        assert!((potential.a_plus.to_f64() - 5f64.ln()).abs() < 1e-12);
        let report = norm_bound_check(&plus, &minus, &potential, 0..=20, &ctx).unwrap();
        assert!(report.all_hold);
        assert_eq!(report.rows.first().unwrap().degree, 5);
    }
}
