//! Capacity witness for infinitely many negative eigenvalues.
use fock_toeplitz::asymptotics::teo2_witness;
use fock_toeplitz::bigarith::BigReal;
use fock_toeplitz::symbols::{capacity, Symbol};

fn main() -> fock_toeplitz::Result<()> {
    let v = Symbol::from_decimal_terms(&[["3", "0", "0.5", "1"], ["0", "0", "2", "-1"]])?;
    let parts = v.decompose()?;
    let bits = 256;
    let e = BigReal::e(bits);
    let a = &e * &capacity(&parts.essential_negative_support, bits).lower.square();
    let b = &e * &capacity(&parts.positive_support, bits).upper.square();
    let w = teo2_witness(&a, &b, 50)?;
    println!("a = {:.4}, b = {:.4}: smallest n = {:?}, checked up to {}, failures {:?}", w.a, w.b, w.smallest, w.checked_up_to, w.failures);
    Ok(())
}
