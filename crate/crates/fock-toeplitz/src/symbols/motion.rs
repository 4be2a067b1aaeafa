use rug::Rational;

use super::geometry::{Disc, Point};
use super::region::RegionSet;
use crate::bigarith::{BigComplex, BigReal};

/// Euclidean motion z ↦ ω·z + c (or ω·z̄ + c when `conjugate`), |ω| = 1, kept exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Motion {
    pub conjugate: bool,
    pub rotation: Point,
    pub translation: Point,
}

impl Motion {
    /// z ↦ 2m − z.
    pub fn point_reflection(m: &Point) -> Self {
        Motion {
            conjugate: false,
            rotation: Point::new(-1, 0),
            translation: Point { x: Rational::from(&m.x * 2u32), y: Rational::from(&m.y * 2u32) },
        }
    }

    /// Reflection across the perpendicular bisector of p and q.
    pub fn bisector_reflection(p: &Point, q: &Point) -> Option<Self> {
        let ux = Rational::from(&q.x - &p.x);
        let uy = Rational::from(&q.y - &p.y);
        let n2 = Rational::from(ux.square_ref()) + Rational::from(uy.square_ref());
        if n2.cmp0().is_eq() {
            return None;
        }
        // line direction e = i·u/|u|, e² = −u²/|u|²
        let ex = Rational::from(uy.square_ref()) - Rational::from(ux.square_ref());
        let ey = Rational::from(&ux * &uy) * Rational::from(-2);
        let rotation = Point { x: ex / &n2, y: ey / n2 };
        let m = Point { x: Rational::from(&p.x + &q.x) / 2u32, y: Rational::from(&p.y + &q.y) / 2u32 };
        // φ(z) = m + e²·conj(z − m), so c = m − e²·m̄
        let (rx, ry) = (&rotation.x, &rotation.y);
        let cx = Rational::from(&m.x - Rational::from(rx * &m.x)) - Rational::from(ry * &m.y);
        let cy = Rational::from(&m.y - Rational::from(ry * &m.x)) + Rational::from(rx * &m.y);
        Some(Motion { conjugate: true, rotation, translation: Point { x: cx, y: cy } })
    }

    pub fn apply(&self, z: &Point) -> Point {
        let (zx, zy) = if self.conjugate { (z.x.clone(), Rational::from(-&z.y)) } else { (z.x.clone(), z.y.clone()) };
        let (wx, wy) = (&self.rotation.x, &self.rotation.y);
        Point {
            x: Rational::from(wx * &zx) - Rational::from(wy * &zy) + &self.translation.x,
            y: Rational::from(wx * &zy) + Rational::from(wy * &zx) + &self.translation.y,
        }
    }

    pub fn apply_disc(&self, d: &Disc) -> Disc {
        Disc::new(self.apply(d.center()), d.radius().clone()).expect("radius is preserved")
    }

    pub fn apply_region(&self, r: &RegionSet) -> RegionSet {
        RegionSet::from_indicator(r.pieces().iter().map(|(d, c)| (self.apply_disc(d), *c)).collect())
    }

    /// Rotation angle θ with ω = e^{iθ}.
    pub fn angle(&self, prec: u32) -> BigReal {
        let mut y = BigReal::from_rational(&self.rotation.y, prec).into_float();
        let x = BigReal::from_rational(&self.rotation.x, prec);
        y.atan2_mut(x.as_float());
        BigReal::from_float(y)
    }

    pub fn apply_complex(&self, z: &BigComplex) -> BigComplex {
        let prec = z.prec();
        let z = if self.conjugate { z.conj() } else { z.clone() };
        &(&self.rotation.to_complex(prec) * &z) + &self.translation.to_complex(prec)
    }
}

/// A motion exchanging the two regions, if one exists. Any such motion swaps
/// the two area centroids, which leaves exactly two candidates: the point
/// reflection through their midpoint and the reflection across their
/// perpendicular bisector. Both are checked exactly.
pub fn detect_swap_symmetry(plus: &RegionSet, minus: &RegionSet) -> Option<Motion> {
    let p = plus.centroid()?;
    let q = minus.centroid()?;
    let mid = Point { x: Rational::from(&p.x + &q.x) / 2u32, y: Rational::from(&p.y + &q.y) / 2u32 };
    let candidates = [Some(Motion::point_reflection(&mid)), Motion::bisector_reflection(&p, &q)];
    candidates
        .into_iter()
        .flatten()
        .find(|m| m.apply_region(plus) == *minus && m.apply_region(minus) == *plus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(x: f64, y: f64, r: f64) -> RegionSet {
        RegionSet::disc(Disc::from_f64(x, y, r).unwrap())
    }

    #[test]
    fn symmetric_pair_is_a_point_reflection() {
        let m = detect_swap_symmetry(&region(-2.0, 0.0, 1.0), &region(2.0, 0.0, 1.0)).unwrap();
        assert!(!m.conjugate);
        assert_eq!(m.translation, Point::origin());
        assert!((m.angle(128).to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn different_radii_have_no_swap() {
        assert!(detect_swap_symmetry(&region(0.0, 0.0, 1.0), &region(4.0, 0.0, 2.0)).is_none());
    }

    #[test]
    fn shifted_pair_and_involution() {
        let (a, b) = (region(-2.0, 1.0, 1.0), region(2.0, 1.0, 1.0));
        let m = detect_swap_symmetry(&a, &b).unwrap();
        let z = Point::from_f64(0.3, -1.7);
        assert_eq!(m.apply(&m.apply(&z)), z);
        assert_eq!(m.apply_region(&a), b);
    }

    #[test]
    fn reflection_needed_for_mirror_pairs() {
        // two-disc blobs that are mirror images but not point-symmetric
        let a = RegionSet::union_of(&[Disc::from_f64(-3.0, 0.0, 1.0).unwrap(), Disc::from_f64(-3.0, 3.0, 0.5).unwrap()]).unwrap();
        let b = RegionSet::union_of(&[Disc::from_f64(3.0, 0.0, 1.0).unwrap(), Disc::from_f64(3.0, 3.0, 0.5).unwrap()]).unwrap();
        let m = detect_swap_symmetry(&a, &b).unwrap();
        assert!(m.conjugate);
        let z = Point::from_f64(0.25, 4.0);
        assert_eq!(m.apply(&m.apply(&z)), z);
        // BigComplex path agrees with the exact one
        let zc = z.to_complex(200);
        let img = m.apply_complex(&zc);
        let exact = m.apply(&z).to_complex(200);
        assert!((&img - &exact).abs().log2_abs() < -190.0);
    }
}
