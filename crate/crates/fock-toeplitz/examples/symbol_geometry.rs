//! Sign decomposition, tilts, swap symmetry and capacities of a disc symbol.
use fock_toeplitz::symbols::{capacity, detect_swap_symmetry, hulls_disjoint, Symbol};
use rug::Rational;

fn main() -> fock_toeplitz::Result<()> {
    let v = Symbol::from_decimal_terms(&[["0", "0", "2", "1"], ["0", "0", "1", "-2"], ["5", "0", "1", "-1"]])?;
    let parts = v.decompose()?;
    println!("bounds {:?}", parts.bounds);
    let sep = hulls_disjoint(&parts.positive_support, &parts.negative_support, 256);
    println!("hulls separated: {} (gap {})", sep.separated, sep.gap.to_f64());
    for (name, region) in [("supp V+", &parts.positive_support), ("supp V-", &parts.negative_support)] {
        let cp = capacity(region, 128);
        println!("Cp({name}) in [{:.6}, {:.6}]", cp.lower.to_f64(), cp.upper.to_f64());
    }
    let (plus, minus) = v.epsilon_tilt(&Rational::from((1, 10)))?;
    println!("tilt+ {}\ntilt- {}", plus.to_json(), minus.to_json());
    println!("swap motion: {:?}", detect_swap_symmetry(&parts.positive_support, &parts.negative_support));
    Ok(())
}
