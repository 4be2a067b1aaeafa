//! Super-exponential decay fits and the capacity limit for a single disc.
use fock_toeplitz::asymptotics::{capacity_limit_profile, counting_law_profile, slope_fit};
use fock_toeplitz::bigarith::{BigReal, PrecisionContext};
use fock_toeplitz::symbols::Symbol;
use fock_toeplitz::toeplitz::spectrum_series;

fn main() -> fock_toeplitz::Result<()> {
    let v = Symbol::from_decimal_terms(&[["0", "0", "1", "1"]])?;
    let ctx = PrecisionContext::for_dimension(41);
    let series = spectrum_series(&v, &[20, 30, 40], &ctx)?;
    let fit = slope_fit(&series.top().certified_plus(), 10..=35)?;
    println!("-log lambda_n ~ {:.3} n log n + {:.3} n (max residual {:.2e})", fit.c, fit.d, fit.max_residual);
    let cap = capacity_limit_profile(&series, 0.1)?;
    println!("n s_n^(1/n) at n = 40: {:.4} (target e = {:.4})", cap.at(40).unwrap_or(f64::NAN), std::f64::consts::E);
    let grid: Vec<BigReal> = [-5, -10, -20].iter().map(|e| BigReal::parse(&format!("1e{e}"), ctx.bits())).collect::<Result<_, _>>()?;
    for row in counting_law_profile(series.top(), &grid, 0.35)?.rows {
        println!("N(lambda) = {:2} vs law {:.2}", row.count, row.law);
    }
    Ok(())
}
