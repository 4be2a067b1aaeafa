//! Inertia of the Gaussian moment form in three bases.
use fock_toeplitz::bigarith::PrecisionContext;
use fock_toeplitz::symbols::{Point, Symbol};
use fock_toeplitz::toeplitz::{inertia_criterion, mobius_inertia_crosscheck, whitened_inertia};

fn main() -> fock_toeplitz::Result<()> {
    let v = Symbol::from_decimal_terms(&[["-1.5", "0", "1", "1"], ["1.5", "0", "1", "-1"]])?;
    let ctx = PrecisionContext::for_dimension(16);
    for n in [3, 6, 9] {
        println!("n = {n}: monomial {:?}, whitened {:?}", inertia_criterion(&v, n, &ctx)?, whitened_inertia(&v, n, &ctx)?);
    }
    let report = mobius_inertia_crosscheck(&v, &Point::new(0, 3), 4, &ctx)?;
    println!("Mobius n = 4 pole 3i: {:?} vs {:?} with {} nodes", report.direct, report.transported, report.nodes);
    Ok(())
}
