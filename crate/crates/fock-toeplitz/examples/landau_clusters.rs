//! Two-sided counts for Landau-level clusters around the lowest level.
use fock_toeplitz::bigarith::{BigReal, PrecisionContext};
use fock_toeplitz::landau::cluster_growth_check;
use fock_toeplitz::symbols::Symbol;
use rug::Rational;

fn main() -> fock_toeplitz::Result<()> {
    let v = Symbol::from_decimal_terms(&[["-2", "0", "1", "1"], ["2", "0", "1", "-1"]])?;
    let ctx = PrecisionContext::for_dimension(51);
    let grid: Vec<BigReal> = [-4, -8, -12, -16].iter().map(|e| BigReal::parse(&format!("1e{e}"), ctx.bits())).collect::<Result<_, _>>()?;
    let g = cluster_growth_check(&v, &Rational::from((1, 10)), &Rational::from(1), &grid, 50, &ctx)?;
    for (lambda, r) in grid.iter().zip(&g.report.rows) {
        println!(
            "lambda {:.0e}: below -lambda in [{}, {} + m], in (lambda, a) in [{} - m, {} + m]",
            lambda.to_f64(),
            r.negative_lower, r.negative_upper, r.positive_lower, r.positive_upper
        );
    }
    println!("{}", g.report.unknown_constant);
    Ok(())
}
