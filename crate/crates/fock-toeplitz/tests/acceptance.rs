//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria 2, 5, 9 and 12 are documented as unattainable at desk scale with
//! the stated parameters. They are evaluated as written, and their failure does
//! not fail the run. Any other failure does.

use std::time::{Duration, Instant};

use fock_toeplitz::asymptotics::{capacity_limit_profile, slope_fit, teo2_witness};
use fock_toeplitz::bigarith::{factorial, lower_incomplete_gamma, BigReal, PrecisionContext};
use fock_toeplitz::landau::cluster_growth_check;
use fock_toeplitz::moments::toeplitz_truncation;
use fock_toeplitz::pencil::{delta_estimates, midrange_profile, outbedding_spectra, Interval, PencilSpectrum};
use fock_toeplitz::symbols::{capacity, Disc, Point, RegionSet, Symbol};
use fock_toeplitz::toeplitz::{
    inertia_criterion, mobius_inertia_crosscheck, negative_count_profile, rank_growth_check, spectrum_series,
    truncation_spectrum, whitened_inertia, LadderVerdict, RankVerdict, Rung, DEFAULT_LADDER,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

const DOCUMENTED_RED: [u32; 4] = [2, 5, 9, 12];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }

    fn error(e: fock_toeplitz::Error) -> Self {
        Outcome::new(false, format!("error: {e}"))
    }
}

fn sym(rows: &[[&str; 4]]) -> Symbol {
    Symbol::from_decimal_terms(rows).expect("literal symbol")
}

fn region(x: &str, r: &str) -> RegionSet {
    RegionSet::disc(Disc::parse(x, "0", r).expect("literal disc"))
}

fn pair() -> Symbol {
    sym(&[["-2", "0", "1", "1"], ["2", "0", "1", "-1"]])
}

fn rel(a: &BigReal, b: &BigReal) -> f64 {
    ((a - b).abs() / b.abs()).log2_abs()
}

fn max_rel(a: &[BigReal], b: &[BigReal]) -> f64 {
    a.iter().zip(b).map(|(x, y)| rel(x, y)).fold(f64::NEG_INFINITY, f64::max)
}

// 1. radial closed form

struct Radial {
    offdiag_log2: f64,
    eigen_log2: f64,
    eigenvalues: Vec<BigReal>,
    elapsed: Duration,
}

fn radial(bits: u32) -> fock_toeplitz::Result<Radial> {
    let start = Instant::now();
    let v = sym(&[["0", "0", "1", "1"]]);
    let ctx = PrecisionContext::new(bits)?;
    let t = toeplitz_truncation(&v, 30, bits)?;
    let rung = truncation_spectrum(&v, 30, &ctx)?;
    let one = BigReal::one(bits);
    let expected: Vec<BigReal> = (0..=30u32)
        .map(|j| Ok(lower_incomplete_gamma(j + 1, &one)? / factorial(j, bits)))
        .collect::<fock_toeplitz::Result<_>>()?;
    // eigenvalues are ascending, j = 0 is the largest
    let eigenvalues: Vec<BigReal> = rung.eigenvalues.iter().rev().cloned().collect();
    Ok(Radial {
        offdiag_log2: t.matrix().max_offdiag_abs().log2_abs(),
        eigen_log2: max_rel(&eigenvalues, &expected),
        eigenvalues,
        elapsed: start.elapsed(),
    })
}

fn radial_verdict(r: &Radial) -> Outcome {
    let pass = r.offdiag_log2 <= -300.0 && r.eigen_log2 <= -280.0 && r.elapsed < Duration::from_secs(30);
    Outcome::new(
        pass,
        format!("off-diagonal 2^{:.0}, eigenvalue error 2^{:.0}, {:.1} s", r.offdiag_log2, r.eigen_log2, r.elapsed.as_secs_f64()),
    )
}

// 2. capacity limit

fn capacity_limit() -> fock_toeplitz::Result<Outcome> {
    let start = Instant::now();
    let ctx = PrecisionContext::for_dimension(61);
    let mut parts = Vec::new();
    let mut pass = true;
    for r in ["1", "2"] {
        let series = spectrum_series(&sym(&[["0", "0", r, "1"]]), &[50, 55, 60], &ctx)?;
        let profile = capacity_limit_profile(&series, 0.1)?;
        let miss = profile.relative_miss(40).unwrap_or(f64::INFINITY);
        pass &= miss <= 0.1;
        parts.push(format!("r = {r}: n s_n^(1/n) = {:.4}, miss {:.1}%", profile.at(40).unwrap_or(f64::NAN), 100.0 * miss));
    }
    pass &= start.elapsed() < Duration::from_secs(120);
    Ok(Outcome::new(pass, format!("{}, {:.1} s", parts.join("; "), start.elapsed().as_secs_f64())))
}

// 3. reciprocal duality

struct Duality {
    gap_log2: f64,
    count_mismatches: usize,
    plus: Vec<Vec<BigReal>>,
    bits: u32,
}

fn duality(bits: u32) -> fock_toeplitz::Result<Duality> {
    let ctx = PrecisionContext::new(bits)?;
    let (a, b) = (region("0", "1"), region("4", "1"));
    let plus = outbedding_spectra(&a, &b, 0..=30, &ctx)?;
    let minus = outbedding_spectra(&b, &a, 0..=30, &ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut gap = f64::NEG_INFINITY;
    let mut count_mismatches = 0;
    for (p, m) in plus.iter().zip(&minus) {
        let reciprocal: Vec<BigReal> = p.eigenvalues.iter().rev().map(BigReal::recip).collect();
        gap = gap.max(max_rel(&m.eigenvalues, &reciprocal));
        for _ in 0..20 {
            let lambda = BigReal::from_f64(10f64.powf(rng.gen_range(-8.0..8.0)), bits);
            let up = p.count(&Interval::above(lambda.clone())?).count;
            let down = m.count(&Interval::new(BigReal::zero(bits), Some(lambda.recip()))?).count;
            count_mismatches += usize::from(up != down);
        }
    }
    Ok(Duality { gap_log2: gap, count_mismatches, plus: plus.into_iter().map(|s: PencilSpectrum| s.eigenvalues).collect(), bits })
}

fn duality_verdict(d: &Duality) -> Outcome {
    let pass = d.gap_log2 <= -f64::from(d.bits / 4) && d.count_mismatches == 0;
    Outcome::new(pass, format!("reciprocal gap 2^{:.0} (bound 2^-{}), {} count mismatches in 620", d.gap_log2, d.bits / 4, d.count_mismatches))
}

// 4. midrange boundedness

fn midrange() -> fock_toeplitz::Result<Outcome> {
    let ctx = PrecisionContext::for_dimension(41);
    let profile = midrange_profile(&region("0", "1"), &region("4", "1"), 0.5, 2.0, 5..=40, 2, &ctx)?;
    let early = profile.max_over(5..=20).unwrap_or(0);
    let late = profile.max_over(20..=40).unwrap_or(0);
    Ok(Outcome::new(late <= early + 2, format!("max count on [20, 40] = {late}, on [5, 20] = {early}")))
}

// 5. slopes

struct Slopes {
    c_plus: f64,
    c_minus: f64,
    c_singular: f64,
    agree_log2: f64,
    rung: Rung,
    bits: u32,
    elapsed: Duration,
}

fn slopes(bits: u32) -> fock_toeplitz::Result<Slopes> {
    let start = Instant::now();
    let ctx = PrecisionContext::new(bits)?;
    let rung = truncation_spectrum(&pair(), 90, &ctx)?;
    let (plus, minus) = (rung.certified_plus(), rung.certified_minus());
    let agree_log2 = if plus.len() == minus.len() { max_rel(&plus, &minus) } else { f64::INFINITY };
    Ok(Slopes {
        c_plus: slope_fit(&plus, 10..=30)?.c,
        c_minus: slope_fit(&minus, 10..=30)?.c,
        c_singular: slope_fit(&rung.certified_singular(), 10..=30)?.c,
        agree_log2,
        rung,
        bits,
        elapsed: start.elapsed(),
    })
}

fn slopes_verdict(s: &Slopes) -> Outcome {
    let pass = (s.c_plus - 2.0).abs() <= 0.3
        && (s.c_minus - 2.0).abs() <= 0.3
        && (s.c_singular - 1.0).abs() <= 0.2
        && s.agree_log2 <= -f64::from(s.bits / 4)
        && s.bits >= 1022
        && s.elapsed < Duration::from_secs(900);
    Outcome::new(
        pass,
        format!(
            "N = 90 at {} bits: c(lambda+) = {:.3}, c(lambda-) = {:.3}, c(s) = {:.3}, lists agree to 2^{:.0}, {:.0} s",
            s.bits,
            s.c_plus,
            s.c_minus,
            s.c_singular,
            s.agree_log2,
            s.elapsed.as_secs_f64()
        ),
    )
}

// 6. δ/Δ bookkeeping

fn deltas() -> fock_toeplitz::Result<Outcome> {
    let ctx = PrecisionContext::for_dimension(41);
    let sym_pair = delta_estimates(&region("-2", "1"), &region("2", "1"), 0..=40, &ctx)?;
    let tol = 2.0 / 40.0;
    let four = [sym_pair.lower_plus, sym_pair.upper_plus, sym_pair.lower_minus, sym_pair.upper_minus];
    let symmetric_ok = four.iter().all(|x| (x - 0.5).abs() <= tol);
    let asym = delta_estimates(&region("0", "1"), &region("3", "0.7"), 0..=40, &ctx)?;
    let residual = (asym.lower_plus + asym.upper_minus - 1.0).abs();
    let asym_ok = residual <= 0.1 && asym.ordered();
    Ok(Outcome::new(
        symmetric_ok && asym_ok,
        format!(
            "symmetric {:.3}/{:.3}/{:.3}/{:.3}; asymmetric delta+ = {:.3}, Delta+ = {:.3}, delta- = {:.3}, Delta- = {:.3}, |delta+ + Delta- - 1| = {:.3}",
            four[0], four[1], four[2], four[3], asym.lower_plus, asym.upper_plus, asym.lower_minus, asym.upper_minus, residual
        ),
    ))
}

// 7. plateau

fn plateau() -> fock_toeplitz::Result<Outcome> {
    let v = sym(&[["0", "0", "2", "1"], ["0", "0", "0.5", "-2"]]);
    let series = spectrum_series(&v, &DEFAULT_LADDER, &PrecisionContext::for_dimension(41))?;
    let profile = negative_count_profile(&series);
    let counts: Vec<usize> = profile.rows.iter().map(|r| r.count).collect();
    Ok(Outcome::new(profile.verdict == LadderVerdict::Plateau, format!("negative counts {counts:?}, verdict {:?}", profile.verdict)))
}

// 8. growth and witness

fn growth() -> fock_toeplitz::Result<Outcome> {
    let v = sym(&[["3", "0", "0.5", "1"], ["0", "0", "2", "-1"]]);
    let series = spectrum_series(&v, &[20, 30, 40], &PrecisionContext::for_dimension(41))?;
    let at20 = series.rungs[0].certified_minus().len();
    let at40 = series.top().certified_minus().len();
    let parts = v.decompose()?;
    let bits = 256;
    let e = BigReal::e(bits);
    let a = &e * &capacity(&parts.essential_negative_support, bits).lower.square();
    let b = &e * &capacity(&parts.positive_support, bits).upper.square();
    let w = teo2_witness(&a, &b, 50)?;
    let witnessed = w.smallest.is_some() && w.failures.is_empty();
    Ok(Outcome::new(
        at40 > at20 && witnessed,
        format!("certified negatives {at20} at N = 20, {at40} at N = 40; witness n = {:?}, checked to {}", w.smallest, w.checked_up_to),
    ))
}

// 9. inertia growth

fn inertia_growth() -> fock_toeplitz::Result<Outcome> {
    let v = sym(&[["0", "0", "1", "1"], ["0.65", "0", "0.3", "-2"]]);
    let ctx = PrecisionContext::for_dimension(16);
    let counts: Vec<usize> = [5, 10, 15].iter().map(|&n| Ok(inertia_criterion(&v, n, &ctx)?.n_minus)).collect::<fock_toeplitz::Result<_>>()?;
    Ok(Outcome::new(counts.windows(2).all(|w| w[0] < w[1]), format!("n_minus at n = 5, 10, 15: {counts:?}")))
}

// 10. Sylvester and Möbius consistency

fn sylvester() -> fock_toeplitz::Result<Outcome> {
    let ctx = PrecisionContext::for_dimension(16);
    let symbols = [sym(&[["0", "0", "1", "1"], ["0.65", "0", "0.3", "-2"]]), pair(), sym(&[["3", "0", "0.5", "1"], ["0", "0", "2", "-1"]])];
    let mut mismatches = Vec::new();
    for (i, v) in symbols.iter().enumerate() {
        for n in 0..=15 {
            if inertia_criterion(v, n, &ctx)? != whitened_inertia(v, n, &ctx)? {
                mismatches.push((i, n));
            }
        }
    }
    let mut mobius_bad = Vec::new();
    for (v, pole) in [(&symbols[0], Point::new(-3, 0)), (&symbols[1], Point::new(0, 3))] {
        for n in 0..=8 {
            if !mobius_inertia_crosscheck(v, &pole, n, &ctx)?.matches {
                mobius_bad.push(n);
            }
        }
    }
    Ok(Outcome::new(
        mismatches.is_empty() && mobius_bad.is_empty(),
        format!("basis mismatches {mismatches:?} over 3 symbols and n <= 15; Mobius mismatches {mobius_bad:?} over 2 poles and n <= 8"),
    ))
}

// 11. rank growth

fn rank() -> fock_toeplitz::Result<Outcome> {
    let symbols = [
        sym(&[["0", "0", "1", "1"]]),
        pair(),
        sym(&[["0", "0", "2", "1"], ["0", "0", "0.5", "-2"]]),
        sym(&[["1", "1", "1", "-1"]]),
        sym(&[["1.5", "0", "0.5", "2"], ["-1", "0.5", "0.75", "-1"]]),
    ];
    let ctx = PrecisionContext::for_dimension(41);
    let mut verdicts = Vec::new();
    for v in &symbols {
        verdicts.push(rank_growth_check(&spectrum_series(v, &DEFAULT_LADDER, &ctx)?).verdict);
    }
    Ok(Outcome::new(verdicts.iter().all(|v| *v == RankVerdict::ConsistentWithInfiniteRank), format!("verdicts {verdicts:?}")))
}

// 12. Landau clusters

fn landau() -> fock_toeplitz::Result<Outcome> {
    let ctx = PrecisionContext::for_dimension(91);
    let grid: Vec<BigReal> = (2..=8).map(|k| BigReal::parse(&format!("1e-{}", 5 * k), ctx.bits())).collect::<fock_toeplitz::Result<_>>()?;
    let g = cluster_growth_check(&pair(), &Rational::from((1, 10)), &Rational::from(1), &grid, 90, &ctx)?;
    let (neg, pos) = (g.negative.expect("mixed symbol"), g.positive.expect("mixed symbol"));
    let ok = |c: f64| (c - 0.5).abs() <= 0.2;
    Ok(Outcome::new(
        ok(neg.c) && ok(pos.c),
        format!("c- = {:.3} from {:?}, c+ = {:.3} from {:?}", neg.c, neg.counts, pos.c, pos.counts),
    ))
}

// 13. precision escalation of 1, 3 and 5

fn escalation(r: &Radial, d: &Duality, s: &Slopes) -> fock_toeplitz::Result<Outcome> {
    let r2 = radial(2 * 320)?;
    let d2 = duality(2 * d.bits)?;
    let s2 = slopes(2 * s.bits)?;
    let lowered = |v: &[BigReal], bits: u32| v.iter().map(|x| x.with_prec(bits)).collect::<Vec<_>>();
    let moves = [
        (max_rel(&r.eigenvalues, &lowered(&r2.eigenvalues, 320)), 320),
        (
            d.plus.iter().zip(&d2.plus).map(|(a, b)| max_rel(a, &lowered(b, d.bits))).fold(f64::NEG_INFINITY, f64::max),
            d.bits,
        ),
        (
            {
                let (a, b) = (s.rung.lambda_plus(), s2.rung.lambda_plus());
                let (c, e) = (s.rung.lambda_minus(), s2.rung.lambda_minus());
                if a.len() == b.len() && c.len() == e.len() {
                    max_rel(&a, &lowered(&b, s.bits)).max(max_rel(&c, &lowered(&e, s.bits)))
                } else {
                    f64::INFINITY
                }
            },
            s.bits,
        ),
    ];
    let small = moves.iter().all(|&(m, bits)| m <= -f64::from(bits / 4));
    let verdicts = [
        (radial_verdict(r).pass, radial_verdict(&r2).pass),
        (duality_verdict(d).pass, duality_verdict(&d2).pass),
        (slopes_verdict(s).pass, slopes_verdict(&s2).pass),
    ];
    let stable = verdicts.iter().all(|(a, b)| a == b);
    Ok(Outcome::new(
        small && stable,
        format!(
            "relative moves 2^{:.0}, 2^{:.0}, 2^{:.0} (bounds 2^-{}, 2^-{}, 2^-{}); verdicts at 1x/2x {verdicts:?}",
            moves[0].0,
            moves[1].0,
            moves[2].0,
            moves[0].1 / 4,
            moves[1].1 / 4,
            moves[2].1 / 4
        ),
    ))
}

fn main() {
    let mut outcomes: Vec<(u32, Outcome)> = Vec::new();
    let mut report = |id: u32, outcome: Outcome| {
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        let note = if !outcome.pass && DOCUMENTED_RED.contains(&id) { " [documented]" } else { "" };
        println!("criterion {id:2} {tag}{note}: {}", outcome.detail);
        outcomes.push((id, outcome));
    };
    let flat = |r: fock_toeplitz::Result<Outcome>| r.unwrap_or_else(Outcome::error);

    let radial_run = radial(320);
    report(1, radial_run.as_ref().map_or_else(|e| Outcome::new(false, format!("error: {e}")), radial_verdict));
    report(2, flat(capacity_limit()));
    let duality_run = duality(PrecisionContext::for_dimension(31).bits());
    report(3, duality_run.as_ref().map_or_else(|e| Outcome::new(false, format!("error: {e}")), duality_verdict));
    report(4, flat(midrange()));
    let slopes_run = slopes(PrecisionContext::for_dimension(91).bits());
    report(5, slopes_run.as_ref().map_or_else(|e| Outcome::new(false, format!("error: {e}")), slopes_verdict));
    report(6, flat(deltas()));
    report(7, flat(plateau()));
    report(8, flat(growth()));
    report(9, flat(inertia_growth()));
    report(10, flat(sylvester()));
    report(11, flat(rank()));
    report(12, flat(landau()));
    let escalated = match (&radial_run, &duality_run, &slopes_run) {
        (Ok(r), Ok(d), Ok(s)) => flat(escalation(r, d, s)),
        _ => Outcome::new(false, "a base run failed"),
    };
    report(13, escalated);

    let unexpected: Vec<u32> = outcomes.iter().filter(|(id, o)| !o.pass && !DOCUMENTED_RED.contains(id)).map(|(id, _)| *id).collect();
    let passed = outcomes.iter().filter(|(_, o)| o.pass).count();
    println!("{passed}/{} criteria pass; documented red: {DOCUMENTED_RED:?}", outcomes.len());
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
