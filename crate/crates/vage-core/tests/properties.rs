//! Property tests for the monoid, weight, and ring laws.

use proptest::prelude::*;

use vage_core::analysis;
use vage_core::monoid::{MultiIndex, TruncationSpec};
use vage_core::series::Series;
use vage_core::weights::{VageMode, WeightSpec};
use vage_core::Complex64;

const WINDOW: TruncationSpec = TruncationSpec {
    max_generator: 3,
    max_degree: 4,
};

fn arb_multi_index() -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(0u32..=2, 3)
        .prop_map(|exps| {
            MultiIndex::from_pairs(exps.into_iter().enumerate().map(|(i, e)| (i as u32 + 1, e)))
        })
        .prop_filter("within window", |a| WINDOW.contains(a))
}

fn arb_coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn arb_series() -> impl Strategy<Value = Series> {
    let indices = WINDOW.enumerate();
    let len = indices.len();
    proptest::collection::vec((proptest::bool::ANY, arb_coeff()), len).prop_map(move |picks| {
        let pairs = indices
            .iter()
            .zip(picks)
            .filter(|(_, (keep, _))| *keep)
            .map(|(alpha, (_, c))| (alpha.clone(), c));
        Series::from_terms(pairs, WINDOW).expect("in window")
    })
}

fn arb_invertible_series() -> impl Strategy<Value = Series> {
    (arb_series(), 0.5..2.0f64, 0.0..core::f64::consts::TAU).prop_map(|(f, modulus, angle)| {
        let constant = Complex64::from_polar(modulus, angle);
        let shift = constant - f.expectation();
        Series::linear_combine(Complex64::new(1.0, 0.0), &f, shift, &Series::one(WINDOW))
            .expect("same window")
    })
}

fn max_coeff_distance(a: &Series, b: &Series) -> f64 {
    let mut worst = 0.0f64;
    for (alpha, &c) in a.terms() {
        worst = worst.max((c - b.coefficient(alpha)).norm());
    }
    for (alpha, &c) in b.terms() {
        worst = worst.max((c - a.coefficient(alpha)).norm());
    }
    worst
}

proptest! {
    #[test]
    fn monoid_add_commutes(a in arb_multi_index(), b in arb_multi_index()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn monoid_add_associates(
        a in arb_multi_index(),
        b in arb_multi_index(),
        c in arb_multi_index(),
    ) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn monoid_identity(a in arb_multi_index()) {
        prop_assert_eq!(a.add(&MultiIndex::zero()), a.clone());
        prop_assert_eq!(MultiIndex::zero().add(&a), a);
    }

    #[test]
    fn sub_undoes_add(a in arb_multi_index(), b in arb_multi_index()) {
        prop_assert_eq!(a.add(&b).try_sub(&b), Some(a));
    }

    #[test]
    fn convolution_commutes(f in arb_series(), g in arb_series()) {
        let fg = f.convolve(&g).unwrap();
        let gf = g.convolve(&f).unwrap();
        prop_assert!(max_coeff_distance(&fg, &gf) < 1e-12);
    }

    #[test]
    fn convolution_associates(f in arb_series(), g in arb_series(), h in arb_series()) {
        let left = f.convolve(&g).unwrap().convolve(&h).unwrap();
        let right = f.convolve(&g.convolve(&h).unwrap()).unwrap();
        prop_assert!(max_coeff_distance(&left, &right) < 1e-12);
    }

    #[test]
    fn convolution_distributes(f in arb_series(), g in arb_series(), h in arb_series()) {
        let one = Complex64::new(1.0, 0.0);
        let sum = Series::linear_combine(one, &g, one, &h).unwrap();
        let left = f.convolve(&sum).unwrap();
        let right = Series::linear_combine(
            one,
            &f.convolve(&g).unwrap(),
            one,
            &f.convolve(&h).unwrap(),
        )
        .unwrap();
        prop_assert!(max_coeff_distance(&left, &right) < 1e-12);
    }

    #[test]
    fn unit_is_neutral(f in arb_series()) {
        let fg = f.convolve(&Series::one(WINDOW)).unwrap();
        prop_assert!(max_coeff_distance(&fg, &f) < 1e-15);
    }

    #[test]
    fn expectation_is_a_unital_homomorphism(f in arb_series(), g in arb_series()) {
        prop_assert_eq!(Series::one(WINDOW).expectation(), Complex64::new(1.0, 0.0));
        let prod = f.convolve(&g).unwrap();
        prop_assert!((prod.expectation() - f.expectation() * g.expectation()).norm() < 1e-12);
        let c1 = Complex64::new(0.5, -2.0);
        let c2 = Complex64::new(-1.5, 0.25);
        let lin = Series::linear_combine(c1, &f, c2, &g).unwrap();
        let expected = c1 * f.expectation() + c2 * g.expectation();
        prop_assert!((lin.expectation() - expected).norm() < 1e-12);
    }

    #[test]
    fn inverse_multiplies_back_to_one(f in arb_invertible_series()) {
        let inv = f.invert().unwrap();
        let product = f.convolve(&inv).unwrap();
        let residual = max_coeff_distance(&product, &Series::one(WINDOW));
        prop_assert!(residual < 1e-12, "residual {residual}");
    }

    #[test]
    fn neumann_agrees_with_exact_inverse(f in arb_invertible_series()) {
        let exact = f.invert().unwrap();
        let neumann = f.neumann_invert(WINDOW.max_degree).unwrap();
        prop_assert!(max_coeff_distance(&exact, &neumann) < 1e-12);
    }

    #[test]
    fn spectrum_is_expectation_singleton(f in arb_series()) {
        let one = Series::one(WINDOW);
        let f0 = f.expectation();
        let at_f0 = Series::linear_combine(Complex64::new(1.0, 0.0), &f, -f0, &one).unwrap();
        prop_assert!(at_f0.invert().is_err());
        let off = Series::linear_combine(
            Complex64::new(1.0, 0.0),
            &f,
            -(f0 + Complex64::new(1.0, 0.0)),
            &one,
        )
        .unwrap();
        prop_assert!(off.invert().is_ok());
    }

    #[test]
    fn derivation_satisfies_leibniz(f in arb_series(), g in arb_series(), n in 1u32..=3) {
        // Differentiating drops one degree, so the identity is exact on
        // degrees < N; at degree N the left side cannot see what truncation
        // removed from the product.
        let prod = f.convolve(&g).unwrap();
        let lhs = prod.derive(n);
        let rhs = Series::linear_combine(
            Complex64::new(1.0, 0.0),
            &f.derive(n).convolve(&g).unwrap(),
            Complex64::new(1.0, 0.0),
            &f.convolve(&g.derive(n)).unwrap(),
        )
        .unwrap();
        let horizon = WINDOW.max_degree as u64 - 1;
        for (alpha, &c) in lhs.terms() {
            if alpha.total_degree() <= horizon {
                prop_assert!((c - rhs.coefficient(alpha)).norm() < 1e-12);
            }
        }
        for (alpha, &c) in rhs.terms() {
            if alpha.total_degree() <= horizon {
                prop_assert!((c - lhs.coefficient(alpha)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn truncation_is_coherent(f in arb_series(), g in arb_series()) {
        // degree <= N coefficients agree with the window-2N computation
        let wide = TruncationSpec::new(WINDOW.max_generator, 2 * WINDOW.max_degree);
        let widen = |s: &Series| {
            Series::from_terms(s.terms().map(|(a, &c)| (a.clone(), c)), wide).unwrap()
        };
        let narrow = f.convolve(&g).unwrap();
        let wide_prod = widen(&f).convolve(&widen(&g)).unwrap();
        for (alpha, &c) in narrow.terms() {
            prop_assert!((c - wide_prod.coefficient(alpha)).norm() < 1e-13);
        }
        for (alpha, &c) in wide_prod.terms() {
            if WINDOW.contains(alpha) {
                prop_assert!((c - narrow.coefficient(alpha)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn exponential_families_are_multiplicative(
        a in arb_multi_index(),
        b in arb_multi_index(),
    ) {
        for w in [
            WeightSpec::Kondratiev,
            WeightSpec::CustomGenerators { weights: vec![1.5, 3.0, 7.5] },
            WeightSpec::tensor(WeightSpec::Kondratiev, WeightSpec::Kondratiev),
        ] {
            let lhs = w.eval(&a).unwrap() * w.eval(&b).unwrap();
            let rhs = w.eval(&a.add(&b)).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }
    }

    #[test]
    fn superexponential_families_respect_the_inequality(
        a in arb_multi_index(),
        b in arb_multi_index(),
    ) {
        for w in [
            WeightSpec::Kondratiev,
            WeightSpec::tensor(WeightSpec::Kondratiev, WeightSpec::GSpace),
        ] {
            let lhs = w.eval(&a).unwrap() * w.eval(&b).unwrap();
            let rhs = w.eval(&a.add(&b)).unwrap();
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }
        // single-generator superexponential family
        let d = WeightSpec::DoublyExponential;
        let n = a.total_degree().min(4) as u32;
        let m = b.total_degree().min(4) as u32;
        let an = d.eval(&MultiIndex::single(1, n.max(1))).unwrap();
        let am = d.eval(&MultiIndex::single(1, m.max(1))).unwrap();
        let sum = d
            .eval(&MultiIndex::single(1, n.max(1) + m.max(1)))
            .unwrap();
        prop_assert!(an * am <= sum * (1.0 + 1e-12));
    }

    #[test]
    fn norms_of_zero_expectation_series_decay(f in arb_series()) {
        // remove the constant term; norms strictly decrease in q and tend to 0
        let tail = Series::linear_combine(
            Complex64::new(1.0, 0.0),
            &f,
            -f.expectation(),
            &Series::one(WINDOW),
        )
        .unwrap();
        prop_assume!(!tail.is_zero());
        let w = WeightSpec::Kondratiev;
        let mut last = f64::INFINITY;
        for q in 1..=10 {
            let norm = tail.norm_p(&w, q).unwrap();
            prop_assert!(norm < last);
            last = norm;
        }
        // every index has weight >= 2, so ten orders shrink the norm by
        // at least 2^{-9/2}
        let first = tail.norm_p(&w, 1).unwrap();
        prop_assert!(last <= first * libm::pow(2.0, -4.5) * (1.0 + 1e-12));
    }

    #[test]
    fn window_power_bound_holds(f in arb_series(), n in 1u32..=4, p in 1i32..=3) {
        let w = WeightSpec::Kondratiev;
        let constant = w.vage_constant(2, VageMode::ClosedForm).unwrap();
        let lhs = f.power(n).norm_p(&w, p + 2).unwrap();
        let base = f.norm_p(&w, p).unwrap();
        let rhs = libm::pow(constant, n as f64) * libm::pow(base, n as f64);
        prop_assert!(lhs <= rhs * (1.0 + 1e-9), "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn random_vage_pairs_hold_for_kondratiev(seed in 0u64..1_000_000) {
        let mut rng = analysis::seeded_rng(seed);
        let w = WeightSpec::Kondratiev;
        let f = analysis::random_unit_norm_series(&w, 1, WINDOW, &mut rng).unwrap();
        let g = analysis::random_unit_norm_series(&w, 3, WINDOW, &mut rng).unwrap();
        let report = analysis::check_vage(&f, &g, &w, 3, 1, 2).unwrap();
        prop_assert!(report.holds, "ratio {}", report.ratio);
    }

    #[test]
    fn partial_constants_stay_below_closed_form(k in 1u32..=4, n in 1u32..=5) {
        let w = WeightSpec::Kondratiev;
        let closed = w.vage_constant(2, VageMode::ClosedForm).unwrap();
        let part = w
            .vage_constant(2, VageMode::Partial(TruncationSpec::new(k, n)))
            .unwrap();
        prop_assert!(part <= closed * (1.0 + 1e-12));
        // growing the window never shrinks the partial constant
        let larger = w
            .vage_constant(2, VageMode::Partial(TruncationSpec::new(k, n + 1)))
            .unwrap();
        prop_assert!(larger >= part);
    }
}
