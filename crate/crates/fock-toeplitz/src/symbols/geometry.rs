use std::cmp::Ordering;
use std::fmt;

use rug::Rational;

use crate::bigarith::{BigComplex, BigReal};
use crate::error::{Error, Result};

/// Parse a plain or scientific decimal literal ("-1.25", "3e-2") exactly.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Config(format!("not a decimal number: {text:?}"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: rug::Integer = digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let mut value = Rational::from(numer);
    if scale >= 0 {
        value *= Rational::from(rug::Integer::from(rug::Integer::u_pow_u(10, scale as u32)));
    } else {
        value /= Rational::from(rug::Integer::from(rug::Integer::u_pow_u(10, (-scale) as u32)));
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Exact point of the plane with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: impl Into<Rational>, y: impl Into<Rational>) -> Self {
        Point { x: x.into(), y: y.into() }
    }

    pub fn origin() -> Self {
        Point::new(0, 0)
    }

    /// Exact conversion of a double pair (every finite double is rational).
    pub fn from_f64(x: f64, y: f64) -> Self {
        let conv = |v: f64| Rational::from_f64(v).expect("finite coordinate");
        Point { x: conv(x), y: conv(y) }
    }

    pub fn dist_sq(&self, other: &Point) -> Rational {
        let dx = Rational::from(&self.x - &other.x);
        let dy = Rational::from(&self.y - &other.y);
        dx.clone() * dx + dy.clone() * dy
    }

    pub fn norm_sq(&self) -> Rational {
        self.dist_sq(&Point::origin())
    }

    pub fn to_complex(&self, prec: u32) -> BigComplex {
        BigComplex::new(BigReal::from_rational(&self.x, prec), BigReal::from_rational(&self.y, prec))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.to_f64();
        write!(f, "({x}, {y})")
    }
}

/// How two discs sit relative to each other. Touching discs count as disjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscRelation {
    Disjoint,
    Equal,
    /// The first disc lies inside the second.
    Inside,
    /// The second disc lies inside the first.
    Contains,
    Overlap,
}

/// Open disc D_r(a).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Disc {
    center: Point,
    radius: Rational,
}

impl Disc {
    pub fn new(center: Point, radius: Rational) -> Result<Self> {
        if radius.cmp0() != Ordering::Greater {
            return Err(Error::Domain(format!("disc radius must be positive, got {}", radius.to_f64())));
        }
        Ok(Disc { center, radius })
    }

    /// Convenience constructor from doubles (converted exactly).
    pub fn from_f64(x: f64, y: f64, radius: f64) -> Result<Self> {
        let r = Rational::from_f64(radius).ok_or_else(|| Error::Domain("radius is not finite".into()))?;
        Disc::new(Point::from_f64(x, y), r)
    }

    /// Parse from decimal strings.
    pub fn parse(x: &str, y: &str, radius: &str) -> Result<Self> {
        Disc::new(Point { x: parse_decimal(x)?, y: parse_decimal(y)? }, parse_decimal(radius)?)
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn radius_sq(&self) -> Rational {
        Rational::from(self.radius.square_ref())
    }

    pub fn radius_real(&self, prec: u32) -> BigReal {
        BigReal::from_rational(&self.radius, prec)
    }

    /// Strictly inside the open disc.
    pub fn contains_point(&self, p: &Point) -> bool {
        p.dist_sq(&self.center) < self.radius_sq()
    }

    /// |center| + radius, the largest modulus on the closed disc.
    pub fn outer_modulus(&self, prec: u32) -> BigReal {
        BigReal::from_rational(&self.center.norm_sq(), prec).sqrt() + self.radius_real(prec)
    }

    pub fn relation(&self, other: &Disc) -> DiscRelation {
        if self == other {
            return DiscRelation::Equal;
        }
        let d2 = self.center.dist_sq(&other.center);
        let sum = Rational::from(&self.radius + &other.radius);
        if d2 >= Rational::from(sum.square_ref()) {
            return DiscRelation::Disjoint;
        }
        let diff = Rational::from(&self.radius - &other.radius);
        if d2 <= Rational::from(diff.square_ref()) {
            return if self.radius < other.radius { DiscRelation::Inside } else { DiscRelation::Contains };
        }
        DiscRelation::Overlap
    }

    /// Image under z ↦ s·z + t for a positive rational scale.
    pub fn transformed(&self, scale: &Rational, shift: &Point) -> Disc {
        Disc {
            center: Point {
                x: Rational::from(scale * &self.center.x) + &shift.x,
                y: Rational::from(scale * &self.center.y) + &shift.y,
            },
            radius: Rational::from(scale * &self.radius),
        }
    }
}

impl fmt::Display for Disc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D_{}{}", self.radius.to_f64(), self.center)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals() {
        assert_eq!(parse_decimal("0.5").unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_decimal("-2").unwrap(), Rational::from(-2));
        assert_eq!(parse_decimal("1.25e2").unwrap(), Rational::from(125));
        assert_eq!(parse_decimal("3e-2").unwrap(), Rational::from((3, 100)));
        assert_eq!(parse_decimal(".65").unwrap(), Rational::from((13, 20)));
        for bad in ["", "-", "1.2.3", "abc", "1e", "0x10"] {
            assert!(parse_decimal(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn relations() {
        let unit = Disc::from_f64(0.0, 0.0, 1.0).unwrap();
        assert_eq!(unit.relation(&Disc::from_f64(4.0, 0.0, 1.0).unwrap()), DiscRelation::Disjoint);
        assert_eq!(unit.relation(&Disc::from_f64(2.0, 0.0, 1.0).unwrap()), DiscRelation::Disjoint);
        assert_eq!(unit.relation(&Disc::from_f64(1.0, 0.0, 1.0).unwrap()), DiscRelation::Overlap);
        assert_eq!(unit.relation(&Disc::from_f64(0.5, 0.0, 0.5).unwrap()), DiscRelation::Contains);
        assert_eq!(Disc::from_f64(0.5, 0.0, 0.5).unwrap().relation(&unit), DiscRelation::Inside);
        assert_eq!(unit.relation(&unit.clone()), DiscRelation::Equal);
        assert!(Disc::from_f64(0.0, 0.0, 0.0).is_err());
    }
}
