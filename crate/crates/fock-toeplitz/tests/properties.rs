use fock_toeplitz::asymptotics::slope_fit;
use fock_toeplitz::bigarith::{
    default_zero_threshold, hermitian_eigenvalues, ldlt_inertia, BigComplex, BigReal, ComplexMatrix, HermitianMatrix,
    InertiaTriple, PrecisionContext,
};
use fock_toeplitz::landau::cluster_bounds;
use fock_toeplitz::moments::{lebesgue_moment, toeplitz_truncation};
use fock_toeplitz::orthopoly::orthonormal_basis;
use fock_toeplitz::pencil::{outbedding_spectra, Interval};
use fock_toeplitz::symbols::{capacity, detect_swap_symmetry, Disc, Point, RegionSet, Symbol, Term};
use fock_toeplitz::toeplitz::{inertia_criterion, truncation_spectrum};
use proptest::prelude::*;
use rug::Rational;

const BITS: u32 = 256;

fn quarter(k: i32) -> Rational {
    Rational::from((k, 4))
}

/// Disc with center and radius on a quarter grid.
fn disc_strategy(center: i32, radius: std::ops::RangeInclusive<i32>) -> impl Strategy<Value = Disc> {
    (-center..=center, -center..=center, radius).prop_map(|(x, y, r)| Disc::new(Point::new(quarter(x), quarter(y)), quarter(r)).unwrap())
}

fn weight_strategy() -> impl Strategy<Value = Rational> {
    prop_oneof![(1..=8i32).prop_map(|k| Rational::from((k, 2))), (1..=8i32).prop_map(|k| Rational::from((-k, 2)))]
}

/// Symbols with up to three terms in a laminar (disjoint or nested) arrangement.
fn laminar_symbol(center: i32, radius: std::ops::RangeInclusive<i32>) -> impl Strategy<Value = Symbol> {
    prop::collection::vec((disc_strategy(center, radius), weight_strategy()), 1..=3).prop_filter_map("laminar", |terms| {
        let s = Symbol::new(terms.into_iter().map(|(d, w)| Term::new(d, w)).collect()).ok()?;
        s.decompose().ok()?;
        Some(s)
    })
}

fn hermitian_strategy(dim: usize) -> impl Strategy<Value = HermitianMatrix> {
    prop::collection::vec((-100i64..=100, -100i64..=100), dim * dim).prop_map(move |raw| {
        HermitianMatrix::from_upper_fn(dim, |j, k| {
            let (re, im) = raw[j * dim + k];
            let im = if j == k { 0 } else { im };
            BigComplex::new(BigReal::from_i64(re, BITS).div_u64(7), BigReal::from_i64(im, BITS).div_u64(11))
        })
    })
}

fn rel_close(a: &BigReal, b: &BigReal, log2_tol: f64) -> bool {
    let scale = a.abs().max(&b.abs()).max(&BigReal::one(a.prec()));
    ((a - b).abs() / scale).log2_abs() <= log2_tol
}

fn rotation(dim: usize, p: usize, q: usize, theta: f64, phase: f64) -> ComplexMatrix {
    let mut g = ComplexMatrix::identity(dim, BITS);
    let unit = BigComplex::from_polar(&BigReal::one(BITS), &BigReal::from_f64(theta, BITS));
    let (c, s) = (unit.re, unit.im);
    let w = BigComplex::from_polar(&BigReal::one(BITS), &BigReal::from_f64(phase, BITS));
    g.set(p, p, BigComplex::from_real(c.clone()));
    g.set(q, q, BigComplex::from_real(c));
    g.set(p, q, w.scale(&s));
    g.set(q, p, w.conj().scale(&-s));
    g
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn eigenvalues_survive_unitary_similarity(m in hermitian_strategy(5), rots in prop::collection::vec((0usize..5, 0usize..5, 0.0..6.3f64, 0.0..6.3f64), 1..6)) {
        let ctx = PrecisionContext::new(BITS).unwrap();
        let mut u = ComplexMatrix::identity(5, BITS);
        for (p, q, theta, phase) in rots.into_iter().filter(|(p, q, ..)| p != q) {
            u = u.matmul(&rotation(5, p, q, theta, phase));
        }
        let before = hermitian_eigenvalues(&m, &ctx).unwrap();
        let after = hermitian_eigenvalues(&m.congruence(&u), &ctx).unwrap();
        let tol = -f64::from(BITS / 2);
        for (a, b) in before.iter().zip(&after) {
            prop_assert!(rel_close(a, b, tol));
        }
        let sum = before.iter().fold(BigReal::zero(BITS), |acc, v| acc + v);
        prop_assert!(rel_close(&sum, &m.trace(), tol));
        let sq = before.iter().fold(BigReal::zero(BITS), |acc, v| acc + v.square()).sqrt();
        prop_assert!(rel_close(&sq, &m.frobenius_norm(), tol));
    }

    #[test]
    fn ldlt_matches_eigenvalue_signs(m in hermitian_strategy(6)) {
        let ctx = PrecisionContext::new(BITS).unwrap();
        let threshold = default_zero_threshold(&m, BITS);
        let eig = hermitian_eigenvalues(&m, &ctx).unwrap();
        prop_assume!(eig.iter().all(|v| v.abs() > threshold.mul_pow2(8)));
        prop_assert_eq!(ldlt_inertia(&m, &threshold), InertiaTriple::from_eigenvalues(&eig, &threshold));
    }

    #[test]
    fn congruence_preserves_inertia(m in hermitian_strategy(5), lower in prop::collection::vec(-50i64..=50, 25)) {
        // unit lower-triangular C is invertible
        let c = ComplexMatrix::from_fn(5, 5, |j, k| match j.cmp(&k) {
            std::cmp::Ordering::Equal => BigComplex::one(BITS),
            std::cmp::Ordering::Greater => BigComplex::from_real(BigReal::from_i64(lower[j * 5 + k], BITS).div_u64(13)),
            std::cmp::Ordering::Less => BigComplex::zero(BITS),
        });
        let ctx = PrecisionContext::new(BITS).unwrap();
        let eig = hermitian_eigenvalues(&m, &ctx).unwrap();
        let threshold = default_zero_threshold(&m, BITS);
        prop_assume!(eig.iter().all(|v| v.abs() > threshold.mul_pow2(8)));
        let moved = m.congruence(&c);
        prop_assert_eq!(ldlt_inertia(&m, &threshold), ldlt_inertia(&moved, &default_zero_threshold(&moved, BITS)));
    }

    #[test]
    fn doubling_precision_moves_eigenvalues_little(m in hermitian_strategy(5)) {
        let ctx = PrecisionContext::new(BITS).unwrap();
        let low = hermitian_eigenvalues(&m, &ctx).unwrap();
        let high = hermitian_eigenvalues(&m.with_prec(2 * BITS), &ctx.scaled(2)).unwrap();
        let scale = m.frobenius_norm();
        for (a, b) in low.iter().zip(&high) {
            prop_assert!(((a - &b.with_prec(BITS)).abs() / &scale).log2_abs() <= -f64::from(BITS / 2));
        }
    }

    #[test]
    fn evaluate_is_additive(a in laminar_symbol(12, 1..=6), b in laminar_symbol(12, 1..=6), x in -16i32..=16, y in -16i32..=16) {
        let z = Point::new(Rational::from((2 * x + 1, 8)), Rational::from((2 * y + 1, 8)));
        let sum = a.plus(&b).unwrap();
        prop_assert_eq!(sum.evaluate(&z), a.evaluate(&z) + b.evaluate(&z));
    }

    #[test]
    fn decomposition_resynthesizes(v in laminar_symbol(12, 1..=6)) {
        let parts = v.decompose().unwrap();
        for i in -15..=15 {
            for j in -15..=15 {
                let z = Point::new(Rational::from((2 * i + 1, 8)), Rational::from((2 * j + 1, 8)));
                let plus = parts.positive_part.as_ref().map_or(Rational::new(), |p| p.evaluate(&z));
                let minus = parts.negative_part.as_ref().map_or(Rational::new(), |p| p.evaluate(&z));
                prop_assert_eq!(plus - minus, v.evaluate(&z));
            }
        }
    }

    #[test]
    fn swap_motion_is_an_involution(a in disc_strategy(16, 1..=4), dx in 12i32..=20, dy in -8i32..=8, x in -20i32..=20, y in -20i32..=20) {
        let b = Disc::new(Point::new(&a.center().x + quarter(dx), &a.center().y + quarter(dy)), a.radius().clone()).unwrap();
        prop_assume!(a.relation(&b) == fock_toeplitz::symbols::DiscRelation::Disjoint);
        let motion = detect_swap_symmetry(&RegionSet::disc(a), &RegionSet::disc(b));
        prop_assert!(motion.is_some());
        let m = motion.unwrap();
        let z = Point::new(quarter(x), quarter(y));
        prop_assert_eq!(m.apply(&m.apply(&z)), z);
    }

    #[test]
    fn capacity_is_monotone(a in disc_strategy(4, 1..=8), dx in 24i32..=40, r in 1i32..=8) {
        let b = Disc::new(Point::new(&a.center().x + quarter(dx), a.center().y.clone()), quarter(r)).unwrap();
        let small = capacity(&RegionSet::disc(a.clone()), 128);
        let large = capacity(&RegionSet::union_of(&[a, b]).unwrap(), 128);
        prop_assert!(small.upper.to_f64() <= large.upper.to_f64() * (1.0 + 1e-9));
        prop_assert!(small.lower.to_f64() <= large.upper.to_f64());
    }

    #[test]
    fn disc_area_is_translation_invariant(d in disc_strategy(40, 1..=12)) {
        let area = lebesgue_moment(&d, 0, 0, BITS);
        let want = BigReal::pi(BITS) * BigReal::from_rational(&d.radius_sq(), BITS);
        prop_assert!(rel_close(&area.re, &want, -f64::from(BITS / 2)));
        prop_assert!(area.im.is_zero() || area.im.log2_abs() < -f64::from(BITS / 2));
    }

    #[test]
    fn slope_fit_recovers_model_members(c in 0.5f64..3.0, d in -2.0f64..2.0) {
        let values: Vec<BigReal> = (1..=30u32)
            .map(|n| {
                let x = BigReal::from_u64(n.into(), BITS);
                let y = &(&x * &x.ln()).mul_f64(c) + &x.mul_f64(d);
                (-y).exp()
            })
            .collect();
        let fit = slope_fit(&values, 5..=30).unwrap();
        prop_assert!((fit.c - c).abs() < 1e-9 && (fit.d - d).abs() < 1e-9 && fit.max_residual < 1e-9, "{fit:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10, ..ProptestConfig::default() })]

    #[test]
    fn nonnegative_symbols_give_psd_truncations(terms in prop::collection::vec((disc_strategy(8, 1..=6), 1..=6i32), 1..=3)) {
        let v = Symbol::new(terms.into_iter().map(|(d, w)| Term::new(d, Rational::from(w))).collect()).unwrap();
        let ctx = PrecisionContext::for_dimension(13);
        let m = toeplitz_truncation(&v, 12, ctx.bits()).unwrap();
        let floor = -BigReal::pow2(-(ctx.bits() as i32) / 2, ctx.bits());
        for e in hermitian_eigenvalues(m.matrix(), &ctx).unwrap() {
            prop_assert!(e >= floor);
        }
    }

    #[test]
    fn spectra_flip_exactly_with_the_sign(v in laminar_symbol(6, 1..=6)) {
        let ctx = PrecisionContext::for_dimension(13);
        let a = truncation_spectrum(&v, 12, &ctx).unwrap();
        let b = truncation_spectrum(&v.negated(), 12, &ctx).unwrap();
        prop_assert_eq!(a.lambda_plus(), b.lambda_minus());
        prop_assert_eq!(a.lambda_minus(), b.lambda_plus());
    }

    #[test]
    fn certified_eigenvalues_are_stable_in_degree(v in laminar_symbol(4, 1..=4)) {
        let ctx = PrecisionContext::for_dimension(26);
        let (n, m) = (20, 25);
        let low = truncation_spectrum(&v, n, &ctx).unwrap();
        let high = truncation_spectrum(&v, m, &ctx).unwrap();
        let tau = &low.tail.value;
        for (lo, hi) in [(low.certified_plus(), high.lambda_plus()), (low.certified_minus(), high.lambda_minus())] {
            for (k, value) in lo.iter().enumerate() {
                prop_assert!((value - &hi[k]).abs() <= *tau, "k = {k}: {} vs {}", value.to_f64(), hi[k].to_f64());
            }
        }
    }

    #[test]
    fn spectrum_edges_sit_inside_the_sign_parts(v in laminar_symbol(6, 1..=6)) {
        let ctx = PrecisionContext::for_dimension(13);
        let parts = v.decompose().unwrap();
        let spec = truncation_spectrum(&v, 12, &ctx).unwrap();
        let slack = BigReal::pow2(-(ctx.bits() as i32) / 2, ctx.bits());
        let top = |s: &Option<Symbol>| s.as_ref().map_or(BigReal::zero(ctx.bits()), |p| {
            truncation_spectrum(p, 12, &ctx).unwrap().eigenvalues.last().unwrap().clone()
        });
        prop_assert!(*spec.eigenvalues.last().unwrap() <= &top(&parts.positive_part) + &slack);
        prop_assert!(spec.eigenvalues[0] >= -(&top(&parts.negative_part) + &slack));
    }

    #[test]
    fn inertia_bounds_the_certified_negative_count(v in laminar_symbol(4, 1..=4), n in 1usize..=4) {
        let ctx = PrecisionContext::for_dimension(31);
        let inertia = inertia_criterion(&v, n, &ctx).unwrap();
        let rung = truncation_spectrum(&v, 30, &ctx).unwrap();
        prop_assert!(inertia.n_minus <= rung.certified_minus().len(), "{inertia:?} vs {}", rung.certified_minus().len());
    }

    #[test]
    fn landau_lower_bounds_stay_below_upper(v in laminar_symbol(4, 1..=4), eps in 1i32..=9) {
        let ctx = PrecisionContext::for_dimension(31);
        let lambdas: Vec<BigReal> = [-2, -4, -6].iter().map(|e| BigReal::parse(&format!("1e{e}"), ctx.bits()).unwrap()).collect();
        let report = cluster_bounds(&v, &Rational::from((eps, 10)), &Rational::from(1), &lambdas, 30, &ctx).unwrap();
        for r in &report.rows {
            prop_assert!(r.negative_lower <= r.negative_upper && r.positive_lower <= r.positive_upper, "{r:?}");
        }
    }

    #[test]
    fn pencil_spectra_are_positive_and_interlace(a in disc_strategy(2, 2..=5), dx in 14i32..=20, r in 2i32..=5, lo in 1i32..=8) {
        let b = Disc::new(Point::new(&a.center().x + quarter(dx), a.center().y.clone()), quarter(r)).unwrap();
        let ctx = PrecisionContext::for_dimension(13);
        let spectra = outbedding_spectra(&RegionSet::disc(a), &RegionSet::disc(b), 0..=12, &ctx).unwrap();
        let above = Interval::above(BigReal::from_rational(&quarter(lo), ctx.bits())).unwrap();
        for pair in spectra.windows(2) {
            prop_assert!(pair[0].eigenvalues.iter().all(BigReal::is_positive));
            prop_assert!(pair[0].count(&above).count <= pair[1].count(&above).count + 1);
            let inverse = pair[0].minus_eigenvalues();
            prop_assert_eq!(inverse.len(), pair[0].eigenvalues.len());
        }
    }

    #[test]
    fn orthonormal_polynomials_are_normalized(d in disc_strategy(8, 2..=8)) {
        let ctx = PrecisionContext::for_dimension(13);
        let basis = orthonormal_basis(&RegionSet::disc(d), 12, &ctx).unwrap();
        prop_assert!(basis.residual_log2 <= -f64::from(ctx.bits() / 4));
        for k in 0..=12 {
            let lead = basis.coefficient(k, k);
            prop_assert!(lead.re.is_positive() && lead.im.is_zero());
        }
    }
}
