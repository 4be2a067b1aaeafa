//! Fits of eigenvalue sequences against −log x_n = c·n log n + d·n, and the
//! verdicts built on them.

mod witness;

use std::ops::RangeInclusive;

use serde::Serialize;

pub use witness::{teo2_witness, Teo2Witness, WITNESS_CAP};

use crate::bigarith::BigReal;
use crate::error::{Error, Result};
use crate::pencil::DeltaEstimates;
use crate::symbols::{capacity, hulls_disjoint, RegionSet};
use crate::toeplitz::{Rung, Side, SpectrumSeries};

pub const MIN_FIT_POINTS: usize = 8;
pub const DEFAULT_CAPACITY_TOLERANCE: f64 = 0.10;
pub const DEFAULT_COUNTING_TOLERANCE: f64 = 0.35;
pub const DEFAULT_SANDWICH_TOLERANCE: f64 = 0.3;
pub const DEFAULT_BETA_CAP: f64 = 5.0;
/// Trailing profile entries that decide a verdict.
pub const TRAILING: usize = 3;

/// Least-squares fit of y_n = −log x_n on the regressors n log n and n.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeFit {
    pub c: f64,
    pub d: f64,
    /// 1-based, inclusive.
    pub window: (usize, usize),
    pub max_residual: f64,
    /// Largest change in c when refitting on either half of the window.
    pub instability: f64,
}

fn solve_two(rows: &[(f64, f64, f64)]) -> Option<(f64, f64)> {
    let (mut aa, mut ab, mut bb, mut ay, mut by) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(a, b, y) in rows {
        aa += a * a;
        ab += a * b;
        bb += b * b;
        ay += a * y;
        by += b * y;
    }
    let det = aa * bb - ab * ab;
    (det.abs() > f64::EPSILON * aa * bb).then(|| ((ay * bb - by * ab) / det, (aa * by - ab * ay) / det))
}

fn regression_rows(logs: &[f64], window: RangeInclusive<usize>) -> Vec<(f64, f64, f64)> {
    window
        .map(|n| {
            let x = n as f64;
            (x * x.ln(), x, logs[n - 1])
        })
        .collect()
}

/// Fits `values` (descending, positive; entry i is x_{i+1}) over a 1-based window.
pub fn slope_fit(values: &[BigReal], window: RangeInclusive<usize>) -> Result<SlopeFit> {
    let (lo, hi) = (*window.start(), *window.end());
    if lo == 0 || hi > values.len() || window.clone().count() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "slope fit needs {MIN_FIT_POINTS} values in [{lo}, {hi}], {} available",
            values.len()
        )));
    }
    if values[lo - 1..hi].iter().any(|v| !v.is_positive()) {
        return Err(Error::Domain("slope fit needs positive values".into()));
    }
    let logs: Vec<f64> = values[..hi].iter().map(|v| -v.ln_abs_f64()).collect();
    let rows = regression_rows(&logs, window.clone());
    let (c, d) = solve_two(&rows).ok_or_else(|| Error::InsufficientData("degenerate regression".into()))?;
    let max_residual = rows.iter().map(|(a, b, y)| (y - c * a - d * b).abs()).fold(0.0, f64::max);
    let mid = (lo + hi) / 2;
    let instability = [lo..=mid, mid..=hi]
        .into_iter()
        .filter_map(|half| solve_two(&regression_rows(&logs, half)))
        .map(|(ch, _)| (ch - c).abs())
        .fold(0.0, f64::max);
    Ok(SlopeFit { c, d, window: (lo, hi), max_residual, instability })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub n: usize,
    pub value: f64,
}

/// n·s_n^{1/n} against the bracket [e·Cp_lower², e·Cp_upper²].
#[derive(Clone, Debug, Serialize)]
pub struct CapacityProfile {
    pub rows: Vec<ProfileRow>,
    pub target_lower: f64,
    pub target_upper: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CapacityProfile {
    pub fn at(&self, n: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.value)
    }

    /// Relative distance of the value at n from the nearest bracket end.
    pub fn relative_miss(&self, n: usize) -> Option<f64> {
        self.at(n).map(|v| {
            if v < self.target_lower {
                1.0 - v / self.target_lower
            } else if v > self.target_upper {
                v / self.target_upper - 1.0
            } else {
                0.0
            }
        })
    }
}

/// Profile over the certified singular values of the top rung. The trailing
/// values must lie in the bracket widened by `tolerance` (relative).
pub fn capacity_limit_profile(series: &SpectrumSeries, tolerance: f64) -> Result<CapacityProfile> {
    let parts = series.symbol.decompose()?;
    if !parts.negative_support.is_empty() {
        return Err(Error::Domain("capacity limit applies to nonnegative symbols".into()));
    }
    let bits = series.bits;
    let s = series.top().certified_singular();
    let rows: Vec<ProfileRow> = s
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let n = i + 1;
            let root = (v.ln() / BigReal::from_u64(n as u64, bits)).exp();
            ProfileRow { n, value: n as f64 * root.to_f64() }
        })
        .collect();
    let cap = capacity(&parts.positive_support, bits);
    let e = std::f64::consts::E;
    let target_lower = e * cap.lower.to_f64().powi(2);
    let target_upper = e * cap.upper.to_f64().powi(2);
    let pass = rows.len() >= TRAILING
        && rows[rows.len() - TRAILING..]
            .iter()
            .all(|r| r.value >= target_lower * (1.0 - tolerance) && r.value <= target_upper * (1.0 + tolerance));
    Ok(CapacityProfile { rows, target_lower, target_upper, tolerance, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct CountingRow {
    pub lambda: f64,
    pub count: usize,
    /// |log λ| / log|log λ|
    pub law: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountingLawProfile {
    pub rows: Vec<CountingRow>,
    pub tolerance: f64,
    pub pass: bool,
}

/// |log λ|/log|log λ|; needs λ < e^{-e} so the logarithms are positive.
pub fn counting_law(lambda: &BigReal) -> Result<f64> {
    let l = -lambda.ln_abs_f64();
    if !lambda.is_positive() || l <= 1.0 {
        return Err(Error::Domain(format!("counting law needs 0 < λ < 1/e, got {}", lambda.to_f64())));
    }
    Ok(l / l.ln())
}

/// N((λ,∞); |T_V|)·log|log λ|/|log λ| over a λ grid, descending λ, from
/// one truncation (normally a series' top rung).
pub fn counting_law_profile(rung: &Rung, lambdas: &[BigReal], tolerance: f64) -> Result<CountingLawProfile> {
    let mut rows = Vec::with_capacity(lambdas.len());
    for lambda in lambdas {
        let count = rung.count(lambda, Side::Abs)?;
        let law = counting_law(lambda)?;
        rows.push(CountingRow { lambda: lambda.to_f64(), count, law, ratio: count as f64 / law });
    }
    let pass = rows.len() >= TRAILING && rows[rows.len() - TRAILING..].iter().all(|r| (r.ratio - 1.0).abs() <= tolerance);
    Ok(CountingLawProfile { rows, tolerance, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct SideCheck {
    pub fit: SlopeFit,
    /// [1/Δ̂ − tol, 1/δ̂ + tol]
    pub allowed: (f64, f64),
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub plus: SideCheck,
    pub minus: SideCheck,
    pub tolerance: f64,
    /// |δ̂_− + Δ̂_+ − 1| and |δ̂_+ + Δ̂_− − 1| from the pencil.
    pub residual_plus: f64,
    pub residual_minus: f64,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.plus.holds && self.minus.holds
    }
}

/// Slopes of λ^± against the pencil windows: c^± ∈ [1/Δ̂± − tol, 1/δ̂± + tol].
pub fn sandwich_check(series: &SpectrumSeries, delta: &DeltaEstimates, window: RangeInclusive<usize>, tolerance: f64) -> Result<SandwichReport> {
    let top = series.top();
    let side = |values: Vec<BigReal>, lower: f64, upper: f64| -> Result<SideCheck> {
        let fit = slope_fit(&values, window.clone())?;
        let allowed = (1.0 / upper - tolerance, 1.0 / lower + tolerance);
        let holds = fit.c >= allowed.0 && fit.c <= allowed.1;
        Ok(SideCheck { fit, allowed, holds })
    };
    Ok(SandwichReport {
        plus: side(top.certified_plus(), delta.lower_plus, delta.upper_plus)?,
        minus: side(top.certified_minus(), delta.lower_minus, delta.upper_minus)?,
        tolerance,
        residual_plus: delta.residual_plus,
        residual_minus: delta.residual_minus,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Corollary36Report {
    /// The positive patch K, as "D_r(x, y)".
    pub patch: String,
    pub hull_gap: f64,
    pub fit: SlopeFit,
    pub beta_cap: f64,
    pub certified_plus: Vec<usize>,
    pub growing: bool,
    pub holds: bool,
}

/// λ_n^+ ≥ e^{−βn log n}: the fitted c⁺ stays below `beta_cap` and the
/// certified positive count grows along the ladder.
pub fn corollary36_check(series: &SpectrumSeries, beta_cap: f64) -> Result<Corollary36Report> {
    let bits = series.bits;
    let parts = series.symbol.decompose()?;
    if parts.positive_support.is_empty() {
        return Err(Error::Precondition("no positive patch".into()));
    }
    let (patch, gap) = if parts.negative_support.is_empty() {
        (parts.positive_support.outer_discs()[0].clone(), f64::INFINITY)
    } else {
        parts
            .positive_support
            .outer_discs()
            .into_iter()
            .map(|d| {
                let sep = hulls_disjoint(&RegionSet::disc(d.clone()), &parts.negative_support, bits);
                (d, sep)
            })
            .filter(|(_, sep)| sep.separated)
            .max_by(|a, b| a.1.gap.total_cmp(&b.1.gap))
            .map(|(d, sep)| (d, sep.gap.to_f64()))
            .ok_or_else(|| Error::Precondition("no positive disc with a hull separated from supp V₋".into()))?
    };
    let plus = series.top().certified_plus();
    let fit = slope_fit(&plus, 2..=plus.len())?;
    let certified_plus: Vec<usize> = series.rungs.iter().map(|r| r.certified_plus().len()).collect();
    let growing = certified_plus.windows(2).all(|w| w[0] <= w[1]) && certified_plus.first() < certified_plus.last();
    Ok(Corollary36Report {
        patch: patch.to_string(),
        hull_gap: gap,
        holds: fit.c <= beta_cap && growing,
        fit,
        beta_cap,
        certified_plus,
        growing,
    })
}
