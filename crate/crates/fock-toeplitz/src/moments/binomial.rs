use std::sync::{Mutex, OnceLock};

use rug::Integer;

use crate::bigarith::BigReal;

fn pascal() -> &'static Mutex<Vec<Vec<Integer>>> {
    static ROWS: OnceLock<Mutex<Vec<Vec<Integer>>>> = OnceLock::new();
    ROWS.get_or_init(|| Mutex::new(vec![vec![Integer::from(1)]]))
}

/// Rows 0..=n of Pascal's triangle, converted at `prec`.
pub(crate) fn binomial_rows(n: usize, prec: u32) -> Vec<Vec<BigReal>> {
    let mut rows = pascal().lock().expect("binomial cache poisoned");
    while rows.len() <= n {
        let last = rows.last().expect("row 0 present");
        let mut next = Vec::with_capacity(last.len() + 1);
        next.push(Integer::from(1));
        next.extend(last.windows(2).map(|w| Integer::from(&w[0] + &w[1])));
        next.push(Integer::from(1));
        rows.push(next);
    }
    rows[..=n].iter().map(|row| row.iter().map(|c| BigReal::from_integer(c, prec)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_six() {
        let rows = binomial_rows(6, 64);
        let six: Vec<f64> = rows[6].iter().map(BigReal::to_f64).collect();
        assert_eq!(six, [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0]);
    }
}
