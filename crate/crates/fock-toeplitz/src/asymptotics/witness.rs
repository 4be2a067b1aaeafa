use serde::Serialize;

use crate::bigarith::BigReal;
use crate::error::{Error, Result};

pub const WITNESS_CAP: u64 = 1_000_000;
const WITNESS_BITS: u32 = 256;

/// Search result for (m+n−1)^{−(m+n−1)} a^{m+n−1} > m^{−m} b^m.
#[derive(Clone, Debug, Serialize)]
pub struct Teo2Witness {
    pub a: f64,
    pub b: f64,
    pub m: u64,
    /// Smallest n ≥ 1 satisfying the inequality; None when none exists below the cap.
    pub smallest: Option<u64>,
    /// 0.9·log(a/b); zero when a ≤ b.
    pub gamma: f64,
    /// Every n with 1 ≤ n < γm/log m was checked; this is the largest such n.
    pub checked_up_to: u64,
    /// Checked n that fail; nonempty means m is not yet large enough.
    pub failures: Vec<u64>,
}

/// log of the left side minus log of the right side.
fn margin(n: u64, m: u64, ln_a: &BigReal, rhs: &BigReal) -> BigReal {
    let big_m = BigReal::from_u64(m + n - 1, WITNESS_BITS);
    let lhs = &big_m * &(ln_a - &big_m.ln());
    lhs - rhs
}

pub fn teo2_witness(a: &BigReal, b: &BigReal, m: u64) -> Result<Teo2Witness> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Domain("witness needs a, b > 0".into()));
    }
    if m < 3 {
        return Err(Error::Domain(format!("witness needs m ≥ 3, got {m}")));
    }
    let ln_a = a.with_prec(WITNESS_BITS).ln();
    let ln_b = b.with_prec(WITNESS_BITS).ln();
    let mm = BigReal::from_u64(m, WITNESS_BITS);
    let rhs = &mm * &(&ln_b - &mm.ln());
    // the left side decreases once m+n−1 > a/e, so the search can stop at a
    let a_f = a.to_f64();
    let mut smallest = None;
    for n in 1..=WITNESS_CAP {
        if margin(n, m, &ln_a, &rhs).is_positive() {
            smallest = Some(n);
            break;
        }
        if (m + n - 1) as f64 > a_f {
            break;
        }
    }
    let ratio = (&ln_a - &ln_b).to_f64();
    let gamma = if ratio > 0.0 { 0.9 * ratio } else { 0.0 };
    let bound = gamma * m as f64 / (m as f64).ln();
    let checked_up_to = if bound > 1.0 { (bound.ceil() as u64 - 1).min(WITNESS_CAP) } else { 0 };
    let failures = (1..=checked_up_to).filter(|&n| !margin(n, m, &ln_a, &rhs).is_positive()).collect();
    Ok(Teo2Witness { a: a_f, b: b.to_f64(), m, smallest, gamma, checked_up_to, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e_times(k: f64) -> BigReal {
        BigReal::e(WITNESS_BITS).mul_f64(k)
    }

    #[test]
    fn separated_capacities() {
        let w = teo2_witness(&e_times(2.0), &e_times(0.5), 50).unwrap();
        assert_eq!(w.smallest, Some(1));
        assert_eq!(w.checked_up_to, 15);
        assert!(w.failures.is_empty(), "{w:?}");
    }

    #[test]
    fn equal_parameters_have_no_witness() {
        let w = teo2_witness(&e_times(1.0), &e_times(1.0), 50).unwrap();
        assert_eq!(w.smallest, None);
        assert_eq!(w.checked_up_to, 0);
    }

    #[test]
    fn small_m_large_ratio() {
        let w = teo2_witness(&BigReal::from_u64(100, 128), &BigReal::one(128), 3).unwrap();
        assert_eq!(w.smallest, Some(1));
        assert!(teo2_witness(&BigReal::one(128), &BigReal::one(128), 2).is_err());
    }
}
