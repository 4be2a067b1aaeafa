//! Orthonormal polynomials of two discs and the n-th root asymptotics off the support.
use fock_toeplitz::bigarith::{BigComplex, PrecisionContext};
use fock_toeplitz::orthopoly::{nth_root_profile, orthonormal_basis};
use fock_toeplitz::symbols::{Disc, RegionSet};

fn main() -> fock_toeplitz::Result<()> {
    let region = RegionSet::union_of(&[Disc::parse("-1.5", "0", "1")?, Disc::parse("1.5", "0", "1")?])?;
    let ctx = PrecisionContext::for_dimension(25);
    let basis = orthonormal_basis(&region, 24, &ctx)?;
    let z = BigComplex::from_f64(0.0, 3.0, ctx.bits());
    let profile = nth_root_profile(&basis, &z, 4..=24)?;
    for row in profile.rows.iter().step_by(4) {
        println!("|P_{}(3i)|^(1/{}) = {:.5}", row.degree, row.degree, row.value);
    }
    println!("Green target {:?} (approximate: {})", profile.target, profile.approximate);
    Ok(())
}
