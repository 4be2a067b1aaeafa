//! Spectra of the outbedding operators A_n^± for two discs.
use fock_toeplitz::bigarith::PrecisionContext;
use fock_toeplitz::pencil::{delta_estimates, midrange_profile, outbedding_spectra};
use fock_toeplitz::symbols::{Disc, RegionSet};

fn main() -> fock_toeplitz::Result<()> {
    let plus = RegionSet::disc(Disc::parse("0", "0", "1")?);
    let minus = RegionSet::disc(Disc::parse("3", "0", "0.7")?);
    let ctx = PrecisionContext::for_dimension(31);
    for s in outbedding_spectra(&plus, &minus, 0..=6, &ctx)? {
        println!("n = {}: below 1 = {}, above 1 = {}, largest = {:.4e}", s.degree, s.below_one(), s.above_one(), s.largest().to_f64());
    }
    let d = delta_estimates(&plus, &minus, 10..=30, &ctx)?;
    println!("delta+ in [{:.3}, {:.3}], delta- in [{:.3}, {:.3}]", d.lower_plus, d.upper_plus, d.lower_minus, d.upper_minus);
    let profile = midrange_profile(&plus, &minus, 0.5, 2.0, 5..=30, 2, &ctx)?;
    println!("counts in (0.5, 2): {:?} -> {:?}", profile.counts, profile.verdict);
    Ok(())
}
