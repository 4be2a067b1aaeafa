//! Fock-space Toeplitz truncation of an off-center disc symbol.
use fock_toeplitz::moments::toeplitz_truncation;
use fock_toeplitz::symbols::Symbol;

fn main() -> fock_toeplitz::Result<()> {
    let v = Symbol::from_json(r#"{"terms": [{"center": ["1.5", "0.5"], "radius": "0.75", "weight": "-2"}]}"#)?;
    let t = toeplitz_truncation(&v, 4, 256)?;
    for j in 0..=4 {
        let row: Vec<String> = (0..=4).map(|k| format!("{:+.3e}", t.get(j, k).re.to_f64())).collect();
        println!("{}", row.join(" "));
    }
    Ok(())
}
