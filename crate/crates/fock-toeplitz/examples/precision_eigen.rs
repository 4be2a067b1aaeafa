//! Jacobi eigenvalues and inertia of a small Hermitian matrix at 256 bits.
use fock_toeplitz::bigarith::{default_zero_threshold, hermitian_eigenvalues, ldlt_inertia, BigReal, HermitianMatrix, PrecisionContext};

fn main() -> fock_toeplitz::Result<()> {
    let ctx = PrecisionContext::new(256)?;
    // Hilbert-like matrix minus a multiple of the identity: indefinite, badly scaled
    let m = HermitianMatrix::from_real_fn(6, ctx.bits(), |j, k| {
        let h = BigReal::one(ctx.bits()).div_u64((j + k + 1) as u64);
        if j == k { h - BigReal::from_f64(0.05, ctx.bits()) } else { h }
    });
    for v in hermitian_eigenvalues(&m, &ctx)? {
        println!("{}", v.to_decimal_digits(40));
    }
    println!("inertia {:?}", ldlt_inertia(&m, &default_zero_threshold(&m, ctx.bits())));
    Ok(())
}
