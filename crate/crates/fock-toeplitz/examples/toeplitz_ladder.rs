//! Certified spectra along a degree ladder and the negative-count verdict.
use fock_toeplitz::bigarith::PrecisionContext;
use fock_toeplitz::symbols::Symbol;
use fock_toeplitz::toeplitz::{negative_count_profile, rank_growth_check, spectrum_series};

fn main() -> fock_toeplitz::Result<()> {
    // negative patch locked inside a positive disc: finitely many negative eigenvalues
    let v = Symbol::from_decimal_terms(&[["0", "0", "2", "1"], ["0", "0", "0.5", "-2"]])?;
    let ladder = [10, 15, 20, 25, 30, 35, 40];
    let series = spectrum_series(&v, &ladder, &PrecisionContext::for_dimension(41))?;
    for rung in &series.rungs {
        println!(
            "N = {:2}  tau = {:.2e}  certified +{} -{}",
            rung.degree,
            rung.tail.value.to_f64(),
            rung.certified_plus().len(),
            rung.certified_minus().len()
        );
    }
    println!("negative count: {:?}", negative_count_profile(&series).verdict);
    println!("rank: {:?}", rank_growth_check(&series).verdict);
    Ok(())
}
