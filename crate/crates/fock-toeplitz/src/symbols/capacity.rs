//! Logarithmic capacity of finite unions of discs.
//!
//! A single outer disc (possibly with holes and islands) has capacity equal to
//! its radius. For several outer components the result is a bracket:
//!
//! * lower: any probability measure μ on K has Cp(K) ≥ exp(−I(μ)). For
//!   μ = Σ mᵢ·(uniform on circle i) the energy is exact,
//!   I = Σ mᵢ²(−log rᵢ) + Σ_{i≠j} mᵢmⱼ(−log dᵢⱼ), minimized over the simplex.
//! * upper: every monic p of degree n has ‖p‖_K ≥ Cp(K)ⁿ. p has its zeros at
//!   Leja points of the boundary; its sup norm on each circle is bounded from M
//!   samples through Bernstein's inequality, ‖p‖ ≤ max|p(samples)| / (1 − nπ/M).

use serde::Serialize;

use super::geometry::Disc;
use super::region::RegionSet;
use crate::bigarith::BigReal;

#[derive(Clone, Debug)]
pub struct CapacityBracket {
    pub lower: BigReal,
    pub upper: BigReal,
    pub exact: bool,
    pub method: CapacityMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityMethod {
    SingleDisc,
    CircleEnergyAndLejaNorm,
}

const LEJA_DEGREES: [usize; 4] = [16, 32, 64, 128];
const BOUNDARY_POINTS: usize = 4096;
/// Relative outward rounding for the double-precision bracket.
const ROUNDING_SLACK: f64 = 1e-10;

/// Capacity bracket of a region; only the outer boundary matters.
pub fn capacity(region: &RegionSet, prec: u32) -> CapacityBracket {
    let outer = region.outer_discs();
    if outer.len() == 1 {
        let r = outer[0].radius_real(prec);
        return CapacityBracket { lower: r.clone(), upper: r, exact: true, method: CapacityMethod::SingleDisc };
    }
    let discs: Vec<FDisc> = outer.iter().map(FDisc::from).collect();
    let max_r = discs.iter().map(|d| d.r).fold(0.0, f64::max);
    let lower = energy_lower_bound(&discs).max(max_r);
    let upper = leja_upper_bound(&discs).min(enclosing_radius(&discs));
    CapacityBracket {
        lower: BigReal::from_f64(lower * (1.0 - ROUNDING_SLACK), prec),
        upper: BigReal::from_f64(upper * (1.0 + ROUNDING_SLACK), prec),
        exact: false,
        method: CapacityMethod::CircleEnergyAndLejaNorm,
    }
}

#[derive(Clone, Copy, Debug)]
struct FDisc {
    x: f64,
    y: f64,
    r: f64,
}

impl From<&Disc> for FDisc {
    fn from(d: &Disc) -> Self {
        let (x, y) = d.center().to_f64();
        FDisc { x, y, r: d.radius().to_f64() }
    }
}

fn energy_matrix(discs: &[FDisc]) -> Vec<Vec<f64>> {
    discs
        .iter()
        .map(|a| {
            discs
                .iter()
                .map(|b| {
                    let d = (a.x - b.x).hypot(a.y - b.y);
                    if d == 0.0 && a.r == b.r {
                        -a.r.ln()
                    } else {
                        // mutual energy of uniform circle measures: −log max(d, r_a, r_b)
                        -d.max(a.r).max(b.r).ln()
                    }
                })
                .collect()
        })
        .collect()
}

fn quad_form(a: &[Vec<f64>], m: &[f64]) -> f64 {
    a.iter().zip(m).map(|(row, mi)| mi * row.iter().zip(m).map(|(x, mj)| x * mj).sum::<f64>()).sum()
}

/// exp(−min_m mᵀAm) over the simplex, by enumerating supports (KKT points of faces).
fn energy_lower_bound(discs: &[FDisc]) -> f64 {
    let a = energy_matrix(discs);
    let k = discs.len();
    let mut best = f64::INFINITY;
    let limit = if k <= 12 { 1usize << k } else { 0 };
    for mask in 1..limit {
        let idx: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).collect()).collect();
        if let Some(w) = solve(&sub, &vec![1.0; idx.len()]) {
            let total: f64 = w.iter().sum();
            if total.abs() < 1e-300 || w.iter().any(|x| x / total <= 0.0) {
                continue;
            }
            let mut m = vec![0.0; k];
            for (t, &i) in idx.iter().enumerate() {
                m[i] = w[t] / total;
            }
            best = best.min(quad_form(&a, &m));
        }
    }
    for i in 0..k {
        let mut m = vec![0.0; k];
        m[i] = 1.0;
        best = best.min(quad_form(&a, &m));
    }
    let uniform = vec![1.0 / k as f64; k];
    best = best.min(quad_form(&a, &uniform));
    (-best).exp()
}

fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(row, bi)| row.iter().copied().chain([*bi]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-13 {
            return None;
        }
        m.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = m[row][col] / m[col][col];
                for c in col..=n {
                    m[row][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

fn boundary_samples(discs: &[FDisc], total: usize) -> Vec<Vec<(f64, f64)>> {
    let perimeter: f64 = discs.iter().map(|d| d.r).sum();
    discs
        .iter()
        .map(|d| {
            let m = ((total as f64 * d.r / perimeter).ceil() as usize).max(64);
            (0..m)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                    (d.x + d.r * t.cos(), d.y + d.r * t.sin())
                })
                .collect()
        })
        .collect()
}

fn leja_upper_bound(discs: &[FDisc]) -> f64 {
    let n_max = *LEJA_DEGREES.last().expect("degrees");
    let candidates: Vec<(f64, f64)> = boundary_samples(discs, BOUNDARY_POINTS).concat();
    // greedy Leja sequence on the candidate set
    let mut score = vec![0.0f64; candidates.len()];
    let mut used = vec![false; candidates.len()];
    let mut zeros: Vec<(f64, f64)> = Vec::with_capacity(n_max);
    let mut current = candidates
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.hypot(a.1 .1).total_cmp(&b.1 .0.hypot(b.1 .1)))
        .map(|(i, _)| i)
        .expect("nonempty boundary");
    for _ in 0..n_max {
        used[current] = true;
        let z = candidates[current];
        zeros.push(z);
        for (i, c) in candidates.iter().enumerate() {
            if !used[i] {
                score[i] += (c.0 - z.0).hypot(c.1 - z.1).ln();
            }
        }
        current = (0..candidates.len())
            .filter(|&i| !used[i])
            .max_by(|&a, &b| score[a].total_cmp(&score[b]))
            .expect("enough candidates");
    }
    LEJA_DEGREES
        .iter()
        .map(|&n| {
            let checks = 64 * n;
            let mut log_max = f64::MIN;
            for d in discs {
                for k in 0..checks {
                    let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / checks as f64;
                    let (x, y) = (d.x + d.r * t.cos(), d.y + d.r * t.sin());
                    let lp: f64 = zeros[..n].iter().map(|z| (x - z.0).hypot(y - z.1).ln()).sum();
                    log_max = log_max.max(lp);
                }
            }
            let correction = -(1.0 - n as f64 * std::f64::consts::PI / checks as f64).ln();
            ((log_max + correction) / n as f64).exp()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Radius of an enclosing disc (center at the midpoint of the extreme extents).
fn enclosing_radius(discs: &[FDisc]) -> f64 {
    let xmin = discs.iter().map(|d| d.x - d.r).fold(f64::INFINITY, f64::min);
    let xmax = discs.iter().map(|d| d.x + d.r).fold(f64::NEG_INFINITY, f64::max);
    let ymin = discs.iter().map(|d| d.y - d.r).fold(f64::INFINITY, f64::min);
    let ymax = discs.iter().map(|d| d.y + d.r).fold(f64::NEG_INFINITY, f64::max);
    let (cx, cy) = ((xmin + xmax) / 2.0, (ymin + ymax) / 2.0);
    discs.iter().map(|d| (d.x - cx).hypot(d.y - cy) + d.r).fold(0.0, f64::max)
}
