//! Closed-form sanity checks, fast enough for every install.

use rug::Rational;
use serde_json::json;

use super::config::JobConfig;
use super::output::{Provenance, Report, Table};
use crate::asymptotics::slope_fit;
use crate::bigarith::{
    cholesky, hermitian_eigenvalues, ldlt_inertia, whiten, BigReal, HermitianMatrix, InertiaTriple, PrecisionContext,
};
use crate::error::Result;
use crate::moments::{fock_moment, fock_norm_sq, gram_matrix};
use crate::orthopoly::orthonormal_basis;
use crate::pencil::{outbedding_spectrum, Interval};
use crate::symbols::{detect_swap_symmetry, Disc, Point, RegionSet, Symbol};
use crate::toeplitz::{classify_counts, negative_count_profile, spectrum_series, CountRow, LadderVerdict};

const BITS: u32 = 192;

type Check = fn(&PrecisionContext) -> Result<bool>;

fn close(a: &BigReal, b: &BigReal, log2_tol: i32) -> bool {
    (a - b).abs() <= b.abs().max(&BigReal::one(a.prec())).mul_pow2(log2_tol)
}

fn diag(values: &[i64]) -> HermitianMatrix {
    HermitianMatrix::diagonal(&values.iter().map(|v| BigReal::from_i64(*v, BITS)).collect::<Vec<_>>())
}

fn sym(rows: &[[&str; 4]]) -> Symbol {
    Symbol::from_decimal_terms(rows).expect("literal symbol")
}

fn eigen_diagonal(ctx: &PrecisionContext) -> Result<bool> {
    let ev = hermitian_eigenvalues(&diag(&[3, 1, 2]), ctx)?;
    Ok(ev.iter().map(BigReal::to_f64).eq([1.0, 2.0, 3.0]))
}

fn cholesky_diagonal(_: &PrecisionContext) -> Result<bool> {
    let l = cholesky(&diag(&[4, 9]))?;
    let m = l.matrix();
    Ok(m.get(0, 0).re.to_f64() == 2.0 && m.get(1, 1).re.to_f64() == 3.0 && m.get(1, 0).is_zero())
}

fn inertia_signs(_: &PrecisionContext) -> Result<bool> {
    let t = ldlt_inertia(&diag(&[1, 0, -1]), &BigReal::zero(BITS));
    Ok(t == InertiaTriple { n_plus: 1, n_zero: 1, n_minus: 1 })
}

fn whiten_identity(_: &PrecisionContext) -> Result<bool> {
    let b = diag(&[2, 8]);
    let same = whiten(&b, &b)?;
    let unchanged = whiten(&b, &diag(&[1, 1]))?;
    let one = BigReal::one(BITS);
    Ok(close(same.diag(0), &one, -150) && close(same.diag(1), &one, -150) && close(unchanged.diag(1), &BigReal::from_i64(8, BITS), -150))
}

fn evaluate_disc(_: &PrecisionContext) -> Result<bool> {
    let v = sym(&[["0", "0", "1", "1"]]);
    let half = Rational::from((1, 2));
    Ok(v.evaluate(&Point::new(half, 0)) == 1 && v.evaluate(&Point::new(Rational::from((3, 2)), 0)) == 0)
}

fn decompose_pair(_: &PrecisionContext) -> Result<bool> {
    let parts = sym(&[["0", "0", "1", "1"], ["4", "0", "1", "-1"]]).decompose()?;
    let one = Some(Rational::from(1));
    let b = &parts.bounds;
    Ok(parts.positive_support == RegionSet::disc(Disc::parse("0", "0", "1")?)
        && parts.negative_support == RegionSet::disc(Disc::parse("4", "0", "1")?)
        && [&b.tau_plus, &b.sigma_plus, &b.tau_minus, &b.sigma_minus].iter().all(|x| **x == one))
}

fn decompose_positive(_: &PrecisionContext) -> Result<bool> {
    let parts = sym(&[["0", "0", "1", "3"]]).decompose()?;
    let three = Some(Rational::from(3));
    Ok(parts.negative_support.is_empty() && parts.bounds.tau_plus == three && parts.bounds.sigma_plus == three)
}

fn swap_symmetry(_: &PrecisionContext) -> Result<bool> {
    let a = RegionSet::disc(Disc::parse("-2", "0", "1")?);
    let b = RegionSet::disc(Disc::parse("2", "0", "1")?);
    let c = RegionSet::disc(Disc::parse("4", "0", "2")?);
    let reflection = detect_swap_symmetry(&a, &b).is_some_and(|m| m.rotation == Point::new(-1, 0) && m.translation == Point::origin());
    Ok(reflection && detect_swap_symmetry(&RegionSet::disc(Disc::parse("0", "0", "1")?), &c).is_none())
}

fn tilt_of_positive(_: &PrecisionContext) -> Result<bool> {
    let v = sym(&[["0", "0", "1", "2"]]);
    let (plus, minus) = v.epsilon_tilt(&Rational::from((1, 10)))?;
    let o = Point::origin();
    Ok(plus.evaluate(&o) == Rational::from((11, 5)) && minus.evaluate(&o) == Rational::from((9, 5)))
}

fn gram_disc(_: &PrecisionContext) -> Result<bool> {
    let g = gram_matrix(&RegionSet::disc(Disc::parse("0", "0", "1")?), 1, BITS)?;
    let pi = BigReal::pi(BITS);
    Ok(close(&g.get(0, 0).re, &pi, -180) && close(&g.get(1, 1).re, &pi.div_u64(2), -180) && g.get(0, 1).is_zero())
}

fn fock_norms(_: &PrecisionContext) -> Result<bool> {
    let pi = BigReal::pi(BITS);
    let ratio = &fock_norm_sq(5, BITS) / &fock_norm_sq(4, BITS);
    Ok(close(&fock_norm_sq(0, BITS), &pi, -180) && close(&fock_norm_sq(3, BITS), &pi.mul_u64(6), -180) && close(&ratio, &BigReal::from_u64(5, BITS), -180))
}

fn fock_moment_centered(_: &PrecisionContext) -> Result<bool> {
    let d = Disc::parse("0", "0", "1")?;
    Ok(fock_moment(&d, 0, 1, BITS)?.is_zero())
}

fn pencil_degree_zero(ctx: &PrecisionContext) -> Result<bool> {
    let plus = RegionSet::disc(Disc::parse("0", "0", "2")?);
    let minus = RegionSet::disc(Disc::parse("5", "0", "1")?);
    let s = outbedding_spectrum(&plus, &minus, 0, ctx)?;
    let unbounded = s.count(&Interval::above(BigReal::zero(ctx.bits()))?).count == 1;
    let empty = Interval::new(BigReal::one(ctx.bits()), Some(BigReal::one(ctx.bits()))).is_err();
    Ok(close(&s.eigenvalues[0], &BigReal::from_f64(0.25, ctx.bits()), -100) && unbounded && empty)
}

fn first_orthonormal(ctx: &PrecisionContext) -> Result<bool> {
    let region = RegionSet::disc(Disc::parse("1", "1", "2")?);
    let basis = orthonormal_basis(&region, 2, ctx)?;
    let expected = region.area(ctx.bits()).sqrt().recip();
    Ok(close(&basis.coefficient(0, 0).abs(), &expected, -100))
}

fn plateau_of_positive(ctx: &PrecisionContext) -> Result<bool> {
    let series = spectrum_series(&sym(&[["0", "0", "1", "1"]]), &[5, 10, 15], ctx)?;
    let profile = negative_count_profile(&series);
    Ok(profile.rows.iter().all(|r| r.count == 0) && profile.verdict == LadderVerdict::Plateau)
}

fn single_rung_undetermined(_: &PrecisionContext) -> Result<bool> {
    Ok(classify_counts(&[CountRow { degree: 10, count: 0, tau: 1.0 }]) == LadderVerdict::Undetermined)
}

fn exact_slope_model(_: &PrecisionContext) -> Result<bool> {
    let values: Vec<BigReal> = (1..=20u32)
        .map(|n| {
            let x = BigReal::from_u64(n.into(), BITS);
            (-(&x * &x.ln()).mul_u64(2)).exp()
        })
        .collect();
    let fit = slope_fit(&values, 3..=20)?;
    Ok((fit.c - 2.0).abs() < 1e-9 && fit.d.abs() < 1e-8 && fit.max_residual < 1e-8)
}

const CHECKS: [(&str, Check); 17] = [
    ("eigenvalues of diag(3,1,2)", eigen_diagonal),
    ("cholesky of diag(4,9)", cholesky_diagonal),
    ("inertia of diag(1,0,-1)", inertia_signs),
    ("whitening by itself and by identity", whiten_identity),
    ("unit disc indicator", evaluate_disc),
    ("decomposition of a separated pair", decompose_pair),
    ("decomposition of a positive symbol", decompose_positive),
    ("swap symmetry of mirrored discs", swap_symmetry),
    ("tilt of a positive symbol", tilt_of_positive),
    ("Lebesgue Gram of the unit disc", gram_disc),
    ("Fock norms", fock_norms),
    ("centered Fock moments are diagonal", fock_moment_centered),
    ("pencil at degree zero", pencil_degree_zero),
    ("constant orthonormal polynomial", first_orthonormal),
    ("positive symbol has a zero plateau", plateau_of_positive),
    ("one rung is undetermined", single_rung_undetermined),
    ("exact slope model", exact_slope_model),
];

pub fn run(job: &JobConfig) -> Result<Report> {
    let ctx = PrecisionContext::new(job.precision_bits.unwrap_or(BITS))?;
    let mut table = Table::new(&["check", "result"]);
    let mut failed = 0;
    let rows: Vec<_> = CHECKS
        .iter()
        .map(|&(name, check)| {
            let outcome = match check(&ctx) {
                Ok(true) => "pass".to_string(),
                Ok(false) => "fail".to_string(),
                Err(e) => format!("error: {e}"),
            };
            if outcome != "pass" {
                failed += 1;
            }
            table.push(vec![name.into(), outcome.clone()]);
            json!({ "check": name, "result": outcome })
        })
        .collect();
    let result = json!({ "checks": rows, "failed": failed });
    let provenance = Provenance::new(job, ctx.bits(), vec![]);
    Ok(Report { provenance, result, table, status: if failed == 0 { 0 } else { 5 } })
}
