use rug::Rational;
use serde::Serialize;

use super::geometry::Disc;
use crate::bigarith::{BigComplex, BigReal};
use crate::error::{Error, Result};

/// Green's function of the disc complement with pole at infinity:
/// g(z) = log(|z − a| / r) for |z − a| ≥ r.
pub fn green_disc_complement(disc: &Disc, z: &BigComplex) -> Result<BigReal> {
    let prec = z.prec();
    let c = disc.center().to_complex(prec);
    let dist = (z - &c).abs();
    let r = disc.radius_real(prec);
    if dist < r {
        return Err(Error::Domain(format!("point lies inside {disc}")));
    }
    Ok((dist / r).ln())
}

/// Constants a₊ = sup over Ω₋ of g₊, a₋ = inf over Ω₊ of g₋, and the margins b±.
#[derive(Clone, Debug)]
pub struct PotentialData {
    pub a_plus: BigReal,
    pub a_minus: BigReal,
    pub b_plus: BigReal,
    pub b_minus: BigReal,
    pub margin: Rational,
}

pub const DEFAULT_MARGIN: (i32, i32) = (1, 20);

#[derive(Serialize)]
struct PotentialRecord {
    a_plus: String,
    a_minus: String,
    b_plus: String,
    b_minus: String,
}

impl PotentialData {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PotentialRecord {
            a_plus: self.a_plus.to_decimal_string(),
            a_minus: self.a_minus.to_decimal_string(),
            b_plus: self.b_plus.to_decimal_string(),
            b_minus: self.b_minus.to_decimal_string(),
        })
        .expect("serializable")
    }
}

/// Closed forms for two disjoint discs at distance d between centers:
/// a₊ = log((d + r₋)/r₊), a₋ = log((d − r₊)/r₋).
pub fn potential_constants(plus: &Disc, minus: &Disc, margin: &Rational, prec: u32) -> Result<PotentialData> {
    let d2 = plus.center().dist_sq(minus.center());
    let sum = Rational::from(plus.radius() + minus.radius());
    if d2 <= Rational::from(sum.square_ref()) {
        return Err(Error::Domain(format!("{plus} and {minus} are not separated")));
    }
    if margin.cmp0().is_le() || *margin >= 1 {
        return Err(Error::Domain("margin must lie in (0, 1)".into()));
    }
    let d = BigReal::from_rational(&d2, prec).sqrt();
    let (rp, rm) = (plus.radius_real(prec), minus.radius_real(prec));
    let a_plus = ((&d + &rm) / &rp).ln();
    let a_minus = ((&d - &rp) / &rm).ln();
    let m = BigReal::from_rational(margin, prec);
    let one = BigReal::one(prec);
    let b_plus = &a_plus * &(&one + &m);
    let b_minus = &a_minus * &(&one - &m);
    Ok(PotentialData { a_plus, a_minus, b_plus, b_minus, margin: margin.clone() })
}
