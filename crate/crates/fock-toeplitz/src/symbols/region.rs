use rug::Rational;
use serde::Serialize;

use super::geometry::{Disc, DiscRelation, Point};
use super::symbol::{classify, Symbol};
use crate::bigarith::{BigComplex, BigReal};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arrangement {
    PairwiseDisjoint,
    Laminar,
    General,
}

/// A planar set given by its indicator Σ cᵢ·χ_{Dᵢ} with integer coefficients,
/// e.g. an annulus is χ_{D₂(0)} − χ_{D₁(0)}. Pieces are sorted and distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSet {
    pieces: Vec<(Disc, i64)>,
    arrangement: Arrangement,
}

impl RegionSet {
    pub(crate) fn from_indicator(mut pieces: Vec<(Disc, i64)>) -> Self {
        pieces.sort();
        let discs: Vec<Disc> = pieces.iter().map(|(d, _)| d.clone()).collect();
        RegionSet { arrangement: classify(&discs), pieces }
    }

    pub fn disc(disc: Disc) -> Self {
        RegionSet::from_indicator(vec![(disc, 1)])
    }

    /// Union of discs that are pairwise disjoint or nested.
    pub fn union_of(discs: &[Disc]) -> Result<Self> {
        if discs.is_empty() {
            return Err(Error::Domain("empty region".into()));
        }
        let ones = Symbol::new(
            discs.iter().map(|d| super::symbol::Term::new(d.clone(), Rational::from(1))).collect(),
        )?;
        Ok(ones.cells()?.region_where(|v| v.cmp0().is_gt()))
    }

    pub fn pieces(&self) -> &[(Disc, i64)] {
        &self.pieces
    }

    pub fn arrangement(&self) -> Arrangement {
        self.arrangement
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Area divided by π, exact.
    pub fn area_over_pi(&self) -> Rational {
        self.pieces.iter().fold(Rational::new(), |acc, (d, c)| acc + d.radius_sq() * Rational::from(*c))
    }

    pub fn area(&self, prec: u32) -> BigReal {
        BigReal::from_rational(&self.area_over_pi(), prec) * BigReal::pi(prec)
    }

    /// Area centroid, exact.
    pub fn centroid(&self) -> Option<Point> {
        let area = self.area_over_pi();
        if area.cmp0().is_eq() {
            return None;
        }
        let (mut x, mut y) = (Rational::new(), Rational::new());
        for (d, c) in &self.pieces {
            let m = d.radius_sq() * Rational::from(*c);
            x += Rational::from(&m * &d.center().x);
            y += m * &d.center().y;
        }
        Some(Point { x: x / &area, y: y / area })
    }

    /// Discs with positive coefficient that are not inside another such disc:
    /// the outer boundary components of the set.
    pub fn outer_discs(&self) -> Vec<Disc> {
        let positive: Vec<&Disc> = self.pieces.iter().filter(|(_, c)| *c > 0).map(|(d, _)| d).collect();
        positive
            .iter()
            .filter(|d| !positive.iter().any(|o| d.relation(o) == DiscRelation::Inside))
            .map(|d| (*d).clone())
            .collect()
    }

    /// Membership of a point in the (open-disc) set.
    pub fn contains(&self, p: &Point) -> bool {
        self.pieces.iter().filter(|(d, _)| d.contains_point(p)).map(|(_, c)| c).sum::<i64>() > 0
    }

    /// Whether z lies in the convex hull, judged by the support function over
    /// `HULL_DIRECTIONS` sampled directions (a slight overestimate of the hull).
    pub fn hull_contains(&self, z: &BigComplex) -> bool {
        let prec = z.prec();
        let two_pi = BigReal::pi(prec).mul_u64(2);
        let one = BigReal::one(prec);
        !self.is_empty()
            && (0..HULL_DIRECTIONS).all(|k| {
                let theta = two_pi.mul_u64(k as u64).div_u64(HULL_DIRECTIONS as u64);
                let u = BigComplex::from_polar(&one, &theta);
                &z.re * &u.re + &z.im * &u.im <= self.support(&u.re, &u.im, prec)
            })
    }

    /// A disc containing the region: centered at the middle of the bounding
    /// box, radius rounded up to a rational.
    pub fn enclosing_disc(&self) -> Option<Disc> {
        let outer = self.outer_discs();
        let first = outer.first()?;
        let bound = |f: &dyn Fn(&Disc) -> Rational, max: bool| {
            outer.iter().map(f).fold(f(first), |acc, v| if (v > acc) == max { v } else { acc })
        };
        let lo_x = bound(&|d| Rational::from(&d.center().x - d.radius()), false);
        let hi_x = bound(&|d| Rational::from(&d.center().x + d.radius()), true);
        let lo_y = bound(&|d| Rational::from(&d.center().y - d.radius()), false);
        let hi_y = bound(&|d| Rational::from(&d.center().y + d.radius()), true);
        let mid = Point { x: (lo_x + hi_x) / 2u32, y: (lo_y + hi_y) / 2u32 };
        let reach = outer
            .iter()
            .map(|d| d.center().dist_sq(&mid).to_f64().sqrt() + d.radius().to_f64())
            .fold(0.0f64, f64::max);
        let radius = Rational::from_f64(reach * (1.0 + 1e-12) + 1e-300)?;
        Disc::new(mid, radius).ok()
    }

    /// Support function h(u) = max over the set of ⟨z, u⟩ for a unit direction u.
    fn support(&self, ux: &BigReal, uy: &BigReal, prec: u32) -> BigReal {
        self.outer_discs()
            .iter()
            .map(|d| {
                let c = d.center();
                BigReal::from_rational(&c.x, prec) * ux + BigReal::from_rational(&c.y, prec) * uy + d.radius_real(prec)
            })
            .reduce(|a, b| a.max(&b))
            .expect("nonempty region")
    }
}

/// Result of the convex-hull separation test.
#[derive(Clone, Debug)]
pub struct HullSeparation {
    pub separated: bool,
    /// Lower bound on dist(Co A, Co B); zero when not separated.
    pub gap: BigReal,
    pub directions: usize,
}

pub const HULL_DIRECTIONS: usize = 256;

/// Certified lower bound on the distance between convex hulls. For every unit
/// u, −h_A(u) − h_B(−u) is at most the distance, so the maximum over sampled
/// directions is a lower bound; a relative slack absorbs rounding.
pub fn hulls_disjoint(a: &RegionSet, b: &RegionSet, prec: u32) -> HullSeparation {
    let zero = BigReal::zero(prec);
    if a.is_empty() || b.is_empty() {
        return HullSeparation { separated: false, gap: zero, directions: 0 };
    }
    let two_pi = BigReal::pi(prec).mul_u64(2);
    let one = BigReal::one(prec);
    let mut best = BigReal::from_i64(i64::MIN / 2, prec);
    let mut scale = zero.clone();
    for k in 0..HULL_DIRECTIONS {
        let theta = two_pi.mul_u64(k as u64).div_u64(HULL_DIRECTIONS as u64);
        let u = BigComplex::from_polar(&one, &theta);
        let ha = a.support(&u.re, &u.im, prec);
        let hb = b.support(&-&u.re, &-&u.im, prec);
        scale = scale.max(&ha.abs()).max(&hb.abs());
        let gap = -(ha + hb);
        if gap > best {
            best = gap;
        }
    }
    let slack = BigReal::pow2(-(prec as i32) + 16, prec) * (scale + one);
    let gap = (best - slack).max(&zero);
    HullSeparation { separated: gap.is_positive(), gap, directions: HULL_DIRECTIONS }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(x: f64, y: f64, r: f64) -> Disc {
        Disc::from_f64(x, y, r).unwrap()
    }

    #[test]
    fn union_handles_nesting() {
        let r = RegionSet::union_of(&[disc(0.0, 0.0, 2.0), disc(0.5, 0.0, 1.0)]).unwrap();
        assert_eq!(r.pieces(), &[(disc(0.0, 0.0, 2.0), 1)]);
        let r = RegionSet::union_of(&[disc(0.0, 0.0, 1.0), disc(5.0, 0.0, 1.0)]).unwrap();
        assert_eq!(r.arrangement(), Arrangement::PairwiseDisjoint);
        assert_eq!(r.area_over_pi(), 2);
        assert!(RegionSet::union_of(&[disc(0.0, 0.0, 1.0), disc(1.0, 0.0, 1.0)]).is_err());
    }

    #[test]
    fn collinear_gap() {
        let s = hulls_disjoint(&RegionSet::disc(disc(0.0, 0.0, 1.0)), &RegionSet::disc(disc(4.0, 0.0, 1.0)), 128);
        assert!(s.separated);
        assert!(s.gap.to_f64() > 2.0 - 1e-12 && s.gap.to_f64() <= 2.0);
        let s = hulls_disjoint(&RegionSet::disc(disc(0.0, 0.0, 1.0)), &RegionSet::disc(disc(1.0, 0.0, 1.0)), 128);
        assert!(!s.separated && s.gap.is_zero());
    }

    #[test]
    fn annulus_area_and_centroid() {
        let r = RegionSet::from_indicator(vec![(disc(0.0, 0.0, 2.0), 1), (disc(0.0, 0.0, 1.0), -1)]);
        assert_eq!(r.area_over_pi(), 3);
        assert_eq!(r.centroid(), Some(Point::origin()));
        assert!(r.contains(&Point::from_f64(1.5, 0.0)) && !r.contains(&Point::from_f64(0.5, 0.0)));
        assert_eq!(r.outer_discs(), vec![disc(0.0, 0.0, 2.0)]);
    }
}
