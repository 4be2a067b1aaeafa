use std::path::Path;

use serde_json::{json, Value};

use super::config::{CommandName, JobConfig};
use super::output::{complex, float, real, reals, to_value, Provenance, Report, Table};
use super::selftest;
use crate::asymptotics::{
    counting_law_profile, slope_fit, teo2_witness, DEFAULT_COUNTING_TOLERANCE, MIN_FIT_POINTS,
};
use crate::bigarith::{policy_bits, BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::landau::{cluster_bounds, cluster_growth_check};
use crate::moments::{gram_matrix, toeplitz_truncation, weighted_moment_matrix, MomentKind, Weight};
use crate::orthopoly::{nth_root_profile, orthonormal_basis};
use crate::pencil::{delta_estimates, midrange_profile, outbedding_spectra, Interval, DEFAULT_MIDRANGE_SLACK};
use crate::symbols::{capacity, hulls_disjoint, Point, RegionSet, Symbol};
use crate::toeplitz::{
    negative_count_profile, rank_growth_check, spectrum_series, Rung, TailBound, DEFAULT_LADDER,
};

const DEFAULT_DEGREE: usize = 20;
const WITNESS_M: u64 = 50;

fn context(job: &JobConfig, dimension: usize) -> Result<PrecisionContext> {
    match job.precision_bits {
        Some(bits) => PrecisionContext::new(bits),
        None => Ok(PrecisionContext::new(policy_bits(dimension)).expect("policy is above the minimum")),
    }
}

fn load_symbol(job: &JobConfig) -> Result<Symbol> {
    Symbol::from_file(job.require(&job.symbol, "symbol")?)
}

fn degree(job: &JobConfig) -> usize {
    job.degree.unwrap_or(DEFAULT_DEGREE)
}

fn support(symbol: &Symbol) -> Result<RegionSet> {
    RegionSet::union_of(&symbol.discs().cloned().collect::<Vec<_>>())
}

fn lambda_grid(job: &JobConfig, prec: u32) -> Result<Vec<BigReal>> {
    job.require(&job.lambda_grid, "lambda-grid")?
        .iter()
        .map(|t| BigReal::parse(t, prec).map_err(|e| Error::Config(format!("--lambda-grid {t:?}: {e}"))))
        .collect()
}

pub fn run(job: &JobConfig) -> Result<Report> {
    match job.command {
        CommandName::Moments => moments(job),
        CommandName::Outbed => outbed(job),
        CommandName::Orthopoly => orthopoly(job),
        CommandName::ToeplitzSpectrum => toeplitz_spectrum(job),
        CommandName::Asymfit => asymfit(job),
        CommandName::Capacity => capacity_report(job),
        CommandName::LandauReport => landau_report(job),
        CommandName::Selftest => selftest::run(job),
    }
}

fn moments(job: &JobConfig) -> Result<Report> {
    let symbol = load_symbol(job)?;
    let n = degree(job);
    let ctx = context(job, n + 1)?;
    let kind = job.kind.unwrap_or(MomentKind::FockToeplitz);
    let m = match kind {
        MomentKind::LebesgueGram => gram_matrix(&support(&symbol)?, n, ctx.bits())?,
        MomentKind::WeightedLebesgue => weighted_moment_matrix(&symbol, n, Weight::Lebesgue, ctx.bits())?,
        MomentKind::WeightedGaussian => weighted_moment_matrix(&symbol, n, Weight::Gaussian, ctx.bits())?,
        MomentKind::FockToeplitz => toeplitz_truncation(&symbol, n, ctx.bits())?,
    };
    let mut table = Table::new(&["j", "k", "re", "im"]);
    let mut entries = Vec::new();
    for j in 0..=n {
        for k in 0..=n {
            let z = m.get(j, k);
            table.push(vec![j.to_string(), k.to_string(), z.re.to_decimal_string(), z.im.to_decimal_string()]);
            entries.push(complex(&z));
        }
    }
    let result = json!({ "kind": kind.to_string(), "degree": n, "entries": entries });
    let provenance = Provenance::new(job, ctx.bits(), vec![n]);
    Ok(Report { provenance, result, table, status: 0 })
}

fn parse_interval(job: &JobConfig, prec: u32) -> Result<Option<(f64, f64)>> {
    let Some((lo, hi)) = &job.interval else { return Ok(None) };
    let lo_v = BigReal::parse(lo, prec).map_err(|e| Error::Config(format!("--interval {lo:?}: {e}")))?;
    let hi_v = match hi.as_str() {
        "inf" | "+inf" | "infinity" => f64::INFINITY,
        text => BigReal::parse(text, prec).map_err(|e| Error::Config(format!("--interval {text:?}: {e}")))?.to_f64(),
    };
    Interval::from_f64(lo_v.to_f64(), hi_v, prec)?;
    Ok(Some((lo_v.to_f64(), hi_v)))
}

fn outbed(job: &JobConfig) -> Result<Report> {
    let symbol = load_symbol(job)?;
    let parts = symbol.decompose()?;
    if parts.positive_support.is_empty() || parts.negative_support.is_empty() {
        return Err(Error::Precondition("outbed needs a symbol with both signs".into()));
    }
    let n = degree(job);
    let ctx = context(job, n + 1)?;
    let spectra = outbedding_spectra(&parts.positive_support, &parts.negative_support, 0..=n, &ctx)?;
    let mut table = Table::new(&["degree", "index", "eigenvalue"]);
    let rows: Vec<Value> = spectra
        .iter()
        .map(|s| {
            for (i, v) in s.eigenvalues.iter().enumerate() {
                table.push(vec![s.degree.to_string(), i.to_string(), v.to_decimal_string()]);
            }
            json!({
                "degree": s.degree,
                "eigenvalues": reals(&s.eigenvalues),
                "below_one": s.below_one(),
                "near_unit": s.near_unit(),
                "above_one": s.above_one(),
                "reciprocal_gap_log2": float(s.reciprocal_gap_log2),
            })
        })
        .collect();
    let delta = if n + 1 >= 10 {
        Some(to_value(&delta_estimates(&parts.positive_support, &parts.negative_support, 0..=n, &ctx)?))
    } else {
        None
    };
    let midrange = match parse_interval(job, ctx.bits())? {
        Some((lo, hi)) => Some(to_value(&midrange_profile(
            &parts.positive_support,
            &parts.negative_support,
            lo,
            hi,
            0..=n,
            DEFAULT_MIDRANGE_SLACK,
            &ctx,
        )?)),
        None => None,
    };
    let result = json!({ "spectra": rows, "delta_estimates": delta, "midrange": midrange });
    let provenance = Provenance::new(job, ctx.bits(), (0..=n).collect())
        .threshold("near_unit_relative", format!("2^-{}", ctx.bits() / 3))
        .threshold("midrange_slack", DEFAULT_MIDRANGE_SLACK);
    Ok(Report { provenance, result, table, status: 0 })
}

fn orthopoly(job: &JobConfig) -> Result<Report> {
    let symbol = load_symbol(job)?;
    let region = support(&symbol)?;
    let n = degree(job);
    let ctx = context(job, n + 1)?;
    let basis = orthonormal_basis(&region, n, &ctx)?;
    let mut table = Table::new(&["k", "j", "re", "im"]);
    let polys: Vec<Value> = (0..=n)
        .map(|k| {
            let coeffs: Vec<Value> = (0..=k)
                .map(|j| {
                    let c = basis.coefficient(j, k);
                    table.push(vec![k.to_string(), j.to_string(), c.re.to_decimal_string(), c.im.to_decimal_string()]);
                    complex(c)
                })
                .collect();
            json!({ "k": k, "coefficients": coeffs })
        })
        .collect();
    let profile = match &job.point {
        Some((x, y)) if n >= 1 => {
            let z = Point::new(x.clone(), y.clone()).to_complex(ctx.bits());
            Some(to_value(&nth_root_profile(&basis, &z, 1..=n)?))
        }
        _ => None,
    };
    let result = json!({
        "polynomials": polys,
        "residual_log2": float(basis.residual_log2),
        "nth_root": profile,
    });
    let provenance = Provenance::new(job, ctx.bits(), vec![n]).threshold("orthonormality_residual", format!("2^-{}", ctx.bits() / 4));
    Ok(Report { provenance, result, table, status: 0 })
}

fn rung_value(rung: &Rung) -> Value {
    json!({
        "N": rung.degree,
        "tau": real(&rung.tail.value),
        "radius": real(&rung.tail.radius),
        "noise_floor": real(&rung.noise_floor),
        "lambda_plus": reals(&rung.lambda_plus()),
        "lambda_minus": reals(&rung.lambda_minus()),
        "certified_counts": {
            "plus": rung.certified_plus().len(),
            "minus": rung.certified_minus().len(),
            "singular": rung.certified_singular().len(),
        },
    })
}

fn toeplitz_spectrum(job: &JobConfig) -> Result<Report> {
    let symbol = load_symbol(job)?;
    let ladder = job.ladder.clone().unwrap_or_else(|| DEFAULT_LADDER.to_vec());
    let top = ladder.iter().copied().max().unwrap_or(0);
    let ctx = context(job, top + 1)?;
    let series = spectrum_series(&symbol, &ladder, &ctx)?;
    let mut table = Table::new(&["N", "sign", "index", "eigenvalue", "certified"]);
    for rung in &series.rungs {
        let threshold = rung.tail.threshold();
        for (sign, list) in [("+", rung.lambda_plus()), ("-", rung.lambda_minus())] {
            for (i, v) in list.iter().enumerate() {
                let certified = (*v > threshold).to_string();
                table.push(vec![rung.degree.to_string(), sign.into(), (i + 1).to_string(), v.to_decimal_string(), certified]);
            }
        }
    }
    let result = json!({
        "symbol": serde_json::from_str::<Value>(&symbol.to_json()).expect("symbol json"),
        "rungs": series.rungs.iter().map(rung_value).collect::<Vec<_>>(),
        "negative_profile": to_value(&negative_count_profile(&series)),
        "rank_growth": to_value(&rank_growth_check(&series)),
    });
    let provenance = Provenance::new(job, ctx.bits(), series.ladder())
        .threshold("certify", "|lambda| > 2 tau(N)")
        .threshold("plateau_tail_drop", crate::toeplitz::PLATEAU_TAIL_DROP)
        .threshold("plateau_rungs", crate::toeplitz::PLATEAU_RUNGS);
    Ok(Report { provenance, result, table, status: 0 })
}

/// Rebuilds the top rung of a spectrum written by `toeplitz-spectrum`.
fn read_rung(path: &Path) -> Result<(Rung, u32)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let bad = |what: &str| Error::Config(format!("{}: missing or malformed {what}", path.display()));
    let bits = doc["provenance"]["precision_bits"].as_u64().ok_or_else(|| bad("provenance.precision_bits"))? as u32;
    let top = doc["result"]["rungs"].as_array().and_then(|r| r.last()).ok_or_else(|| bad("result.rungs"))?;
    let number = |key: &str| -> Result<BigReal> {
        top[key].as_str().ok_or_else(|| bad(key)).and_then(|t| BigReal::parse(t, bits))
    };
    let list = |key: &str| -> Result<Vec<BigReal>> {
        top[key].as_array().ok_or_else(|| bad(key))?.iter().map(|v| v.as_str().ok_or_else(|| bad(key)).and_then(|t| BigReal::parse(t, bits))).collect()
    };
    let degree = top["N"].as_u64().ok_or_else(|| bad("N"))? as usize;
    let mut eigenvalues: Vec<BigReal> = list("lambda_minus")?.iter().map(|v| -v).collect();
    eigenvalues.extend(list("lambda_plus")?.into_iter().rev());
    eigenvalues.sort_by(BigReal::total_cmp);
    let tail = TailBound { degree, radius: number("radius")?, value: number("tau")? };
    Ok((Rung { degree, tail, noise_floor: number("noise_floor")?, eigenvalues }, bits))
}

fn asymfit(job: &JobConfig) -> Result<Report> {
    let (rung, bits) = read_rung(job.require(&job.input, "input")?)?;
    let bits = job.precision_bits.unwrap_or(bits);
    let mut fits = serde_json::Map::new();
    let mut table = Table::new(&["sequence", "c", "d", "lo", "hi", "max_residual", "instability"]);
    for (name, values) in [
        ("lambda_plus", rung.certified_plus()),
        ("lambda_minus", rung.certified_minus()),
        ("singular", rung.certified_singular()),
    ] {
        let window = job.window.unwrap_or((1, values.len()));
        if values.len() < MIN_FIT_POINTS || window.1 > values.len() {
            fits.insert(name.into(), Value::Null);
            continue;
        }
        let fit = slope_fit(&values, window.0..=window.1)?;
        table.push(vec![
            name.into(),
            float(fit.c),
            float(fit.d),
            fit.window.0.to_string(),
            fit.window.1.to_string(),
            float(fit.max_residual),
            float(fit.instability),
        ]);
        fits.insert(name.into(), to_value(&fit));
    }
    let counting = match &job.lambda_grid {
        Some(_) => Some(to_value(&counting_law_profile(&rung, &lambda_grid(job, bits)?, DEFAULT_COUNTING_TOLERANCE)?)),
        None => None,
    };
    let result = json!({ "degree": rung.degree, "fits": fits, "counting_law": counting });
    let provenance = Provenance::new(job, bits, vec![rung.degree])
        .threshold("min_fit_points", MIN_FIT_POINTS)
        .threshold("counting_tolerance", DEFAULT_COUNTING_TOLERANCE);
    Ok(Report { provenance, result, table, status: 0 })
}

fn capacity_report(job: &JobConfig) -> Result<Report> {
    let symbol = load_symbol(job)?;
    let bits = job.precision_bits.unwrap_or(256);
    let parts = symbol.decompose()?;
    let e = BigReal::e(bits);
    let mut table = Table::new(&["set", "lower", "upper", "exact", "e_cp2_lower", "e_cp2_upper"]);
    let mut sets = serde_json::Map::new();
    let mut brackets = Vec::new();
    for (name, region) in [
        ("supp_v", support(&symbol)?),
        ("supp_v_plus", parts.positive_support.clone()),
        ("supp_minus_v_minus", parts.essential_negative_support.clone()),
    ] {
        if region.is_empty() {
            sets.insert(name.into(), Value::Null);
            brackets.push(None);
            continue;
        }
        let b = capacity(&region, bits);
        let (lo, hi) = (&e * &b.lower.square(), &e * &b.upper.square());
        table.push(vec![name.into(), b.lower.to_decimal_string(), b.upper.to_decimal_string(), b.exact.to_string(), lo.to_decimal_string(), hi.to_decimal_string()]);
        sets.insert(
            name.into(),
            json!({
                "lower": real(&b.lower),
                "upper": real(&b.upper),
                "exact": b.exact,
                "method": to_value(&b.method),
                "e_cp2": [real(&lo), real(&hi)],
            }),
        );
        brackets.push(Some(b));
    }
    let witness = match (&brackets[2], &brackets[1]) {
        (Some(minus), Some(plus)) => {
            let a = &e * &minus.lower.square();
            let b = &e * &plus.upper.square();
            Some(to_value(&teo2_witness(&a, &b, WITNESS_M)?))
        }
        _ => None,
    };
    let result = json!({ "capacities": sets, "witness": witness });
    let provenance = Provenance::new(job, bits, vec![]).threshold("witness_m", WITNESS_M);
    Ok(Report { provenance, result, table, status: 0 })
}

fn landau_report(job: &JobConfig) -> Result<Report> {
    let symbol = load_symbol(job)?;
    let epsilon = job.require(&job.epsilon, "epsilon")?;
    let a = job.require(&job.a, "a")?;
    let n = job.degree.unwrap_or(40);
    let ctx = context(job, n + 1)?;
    let lambdas = lambda_grid(job, ctx.bits())?;
    let parts = symbol.decompose()?;
    let separated = parts.positive_support.is_empty()
        || parts.negative_support.is_empty()
        || hulls_disjoint(&parts.positive_support, &parts.negative_support, ctx.bits()).separated;
    let decreasing = lambdas.len() >= 2 && lambdas.windows(2).all(|w| w[0] > w[1]);
    let (mut report, growth) = if separated && decreasing {
        let g = cluster_growth_check(&symbol, epsilon, a, &lambdas, n, &ctx)?;
        let sides = json!({ "negative": to_value(&g.negative), "positive": to_value(&g.positive) });
        (g.report, Some(sides))
    } else {
        (cluster_bounds(&symbol, epsilon, a, &lambdas, n, &ctx)?, None)
    };
    // echo λ as given rather than its binary rounding
    for (row, text) in report.rows.iter_mut().zip(job.lambda_grid.iter().flatten()) {
        row.lambda = text.clone();
    }
    let mut table = Table::new(&["lambda", "negative_lower", "negative_upper", "positive_lower", "positive_upper"]);
    for r in &report.rows {
        table.push(vec![
            r.lambda.clone(),
            r.negative_lower.to_string(),
            r.negative_upper.to_string(),
            r.positive_lower.to_string(),
            r.positive_upper.to_string(),
        ]);
    }
    let result = json!({ "bounds": to_value(&report), "growth": growth });
    let provenance = Provenance::new(job, ctx.bits(), vec![n]).threshold("certify", "lambda > 2 tau(N)");
    Ok(Report { provenance, result, table, status: 0 })
}
