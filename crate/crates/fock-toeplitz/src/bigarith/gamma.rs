//! Lower incomplete gamma function at integer order, and factorial helpers.
//!
//! Above the transition point (x ≥ s) the upward recurrence
//! γ(s,x) = (s−1)·γ(s−1,x) − x^{s−1}e^{−x} is well conditioned and is used
//! directly. Below it the same recurrence loses about log2((s−1)!/x^s) bits per
//! evaluation, so the value is taken from the positive series
//! γ(s,x) = x^s e^{−x} Σ_k x^k / (s(s+1)…(s+k)). Ladders run the recurrence
//! downward from a series-seeded top value, which only ever adds positive terms.

use rug::{Float, Integer};

use super::real::BigReal;
use crate::error::{Error, Result};

const GUARD: u32 = 32;

fn check(s: u32, x: &BigReal) -> Result<()> {
    if s == 0 {
        return Err(Error::Domain("incomplete gamma order must be >= 1".into()));
    }
    if x.is_negative() {
        return Err(Error::Domain(format!("incomplete gamma argument must be >= 0, got {}", x.to_f64())));
    }
    Ok(())
}

/// γ(s, x) = ∫₀ˣ t^{s−1} e^{−t} dt for integer s ≥ 1, at the precision of `x`.
pub fn lower_incomplete_gamma(s: u32, x: &BigReal) -> Result<BigReal> {
    check(s, x)?;
    let prec = x.prec();
    if x.is_zero() {
        return Ok(BigReal::zero(prec));
    }
    let work = x.with_prec(prec + GUARD + 2 * (32 - s.leading_zeros()));
    let value = if work >= f64::from(s) { upward(s, &work) } else { series(s, &work) };
    Ok(value.with_prec(prec))
}

/// γ(1,x), …, γ(s_max,x); entry `i` holds γ(i+1, x).
pub fn lower_incomplete_gamma_ladder(s_max: u32, x: &BigReal) -> Result<Vec<BigReal>> {
    check(s_max, x)?;
    let prec = x.prec();
    if x.is_zero() {
        return Ok(vec![BigReal::zero(prec); s_max as usize]);
    }
    let work = x.with_prec(prec + GUARD + 2 * (32 - s_max.leading_zeros()));
    let top = if work >= f64::from(s_max) { upward(s_max, &work) } else { series(s_max, &work) };
    let mut out = vec![BigReal::zero(prec); s_max as usize];
    // w = x^{s} e^{-x}, stepping s downward
    let mut w = work.powu(s_max - 1) * (-&work).exp();
    let mut g = top;
    out[(s_max - 1) as usize] = g.with_prec(prec);
    for s in (1..s_max).rev() {
        // γ(s) = (γ(s+1) + x^s e^{-x}) / s
        g = (&g + &w).div_u64(u64::from(s));
        out[(s - 1) as usize] = g.with_prec(prec);
        if s > 1 {
            w = &w / &work;
        }
    }
    Ok(out)
}

/// P(s, x) = γ(s, x) / (s−1)!.
pub fn regularized_gamma_p(s: u32, x: &BigReal) -> Result<BigReal> {
    let g = lower_incomplete_gamma(s, x)?;
    Ok(g / factorial(s - 1, x.prec()))
}

fn upward(s: u32, x: &BigReal) -> BigReal {
    let prec = x.prec();
    let e = (-x).exp();
    let mut m1 = Float::with_val(prec, -x.as_float());
    m1.exp_m1_mut();
    let mut g = BigReal::from_float(m1).abs();
    let mut p = BigReal::one(prec); // x^{k-1}
    for k in 2..=s {
        p = &p * x;
        g = g.mul_u64(u64::from(k - 1)) - &p * &e;
    }
    g
}

fn series(s: u32, x: &BigReal) -> BigReal {
    let prec = x.prec();
    let mut term = BigReal::one(prec).div_u64(u64::from(s));
    let mut sum = term.clone();
    let stop = -(prec as f64) - 8.0;
    let mut k: u64 = 1;
    loop {
        term = (&term * x).div_u64(u64::from(s) + k);
        sum += &term;
        if term.log2_abs() - sum.log2_abs() < stop {
            break;
        }
        k += 1;
    }
    sum * x.powu(s) * (-x).exp()
}

/// n! at the given precision.
pub fn factorial(n: u32, prec: u32) -> BigReal {
    BigReal::from_integer(&Integer::from(Integer::factorial(n)), prec)
}

/// ln(n!) in double precision (exact summation for small n, Stirling series above).
pub fn ln_factorial(n: u64) -> f64 {
    if n < 64 {
        return (2..=n).map(|k| (k as f64).ln()).sum();
    }
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
}

/// log2(n!) in double precision.
pub fn log2_factorial(n: u64) -> f64 {
    ln_factorial(n) / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Σ (−1)^k x^{k+1} / (k!(k+1)), the Taylor series of 1 − e^{−x}.
    fn alternating_oracle(x: &BigReal) -> BigReal {
        let prec = x.prec() + 64;
        let x = x.with_prec(prec);
        let mut sum = BigReal::zero(prec);
        let mut pow = x.clone(); // x^{k+1}/k!
        for k in 0..400u64 {
            let term = pow.div_u64(k + 1);
            if k % 2 == 0 {
                sum += &term;
            } else {
                sum -= &term;
            }
            pow = (&pow * &x).div_u64(k + 1);
        }
        sum
    }

    /// (s−1)!·(1 − e^{−x} Σ_{k<s} x^k/k!) evaluated with enough extra bits to absorb its cancellation.
    fn finite_sum_oracle(s: u32, x: f64, prec: u32) -> BigReal {
        let p = prec + 4000;
        let xb = BigReal::from_f64(x, p);
        let mut partial = BigReal::zero(p);
        let mut term = BigReal::one(p);
        for k in 0..s {
            partial += &term;
            term = (&term * &xb).div_u64(u64::from(k) + 1);
        }
        let one = BigReal::one(p);
        factorial(s - 1, p) * (one - (-&xb).exp() * partial)
    }

    #[test]
    fn order_one_at_one_matches_series() {
        let x = BigReal::one(256);
        let g = lower_incomplete_gamma(1, &x).unwrap();
        let o = alternating_oracle(&x);
        assert!(g.rel_diff(&o, &BigReal::zero(256)).log2_abs() < -248.0);
        assert!((g.to_f64() - 0.632_120_558_828_557_7).abs() < 1e-15);
    }

    #[test]
    fn zero_argument_and_domain() {
        assert!(lower_incomplete_gamma(1, &BigReal::zero(128)).unwrap().is_zero());
        assert!(lower_incomplete_gamma(3, &BigReal::from_f64(-1.0, 128)).is_err());
        assert!(lower_incomplete_gamma(0, &BigReal::one(128)).is_err());
    }

    #[test]
    fn order_two_large_argument() {
        let x = BigReal::from_u64(50, 256);
        let g = lower_incomplete_gamma(2, &x).unwrap();
        let closed = BigReal::one(256) - (-&x).exp().mul_u64(51);
        assert!(g.rel_diff(&closed, &BigReal::zero(256)).log2_abs() < -248.0);
    }

    #[test]
    fn both_regimes_match_finite_sum() {
        for &(s, x) in &[(1, 0.25), (5, 0.5), (30, 1.0), (40, 4.0), (12, 30.0), (90, 0.09), (7, 7.0)] {
            let g = lower_incomplete_gamma(s, &BigReal::from_f64(x, 300)).unwrap();
            let o = finite_sum_oracle(s, x, 300);
            let rel = g.rel_diff(&o, &BigReal::zero(300)).log2_abs();
            assert!(rel < -292.0, "s={s} x={x} rel={rel}");
        }
    }

    #[test]
    fn ladder_matches_pointwise() {
        for &x in &[0.04, 1.0, 4.0, 60.0] {
            let xb = BigReal::from_f64(x, 320);
            let ladder = lower_incomplete_gamma_ladder(70, &xb).unwrap();
            for s in [1u32, 2, 10, 35, 69, 70] {
                let g = lower_incomplete_gamma(s, &xb).unwrap();
                let rel = ladder[(s - 1) as usize].rel_diff(&g, &BigReal::zero(320)).log2_abs();
                assert!(rel < -310.0, "x={x} s={s} rel={rel}");
            }
        }
    }

    #[test]
    fn stirling_branch_is_continuous() {
        assert!((ln_factorial(63) - (2..=63).map(|k| (k as f64).ln()).sum::<f64>()).abs() < 1e-9);
        let exact: f64 = (2..=64u64).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(64) - exact).abs() < 1e-9);
    }
}
