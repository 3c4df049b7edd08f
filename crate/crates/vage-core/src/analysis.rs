//! Numerical verification of the convolution-norm inequalities: the Våge
//! inequality for superexponential weights, its failure for the Schwartz
//! weight, and partial-product convergence experiments.

pub use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::monoid::{MultiIndex, TruncationSpec};
use crate::series::Series;
use crate::weights::{VageMode, WeightSpec};

/// Relative slack on `holds`: the inequality is exact but both sides pass
/// through floating summation.
pub const HOLDS_SLACK: f64 = 1e-9;

/// One evaluation of `‖fg‖_p ≤ A(p-q) ‖f‖_q ‖g‖_p` on a window.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs` when `rhs > 0`.
    pub ratio: f64,
    /// `ratio <= 1 + HOLDS_SLACK`.
    pub holds: bool,
    pub p: i32,
    pub q: i32,
    pub d: u32,
    /// The constant `A(p-q)` used on the right-hand side.
    pub constant: f64,
}

/// Evaluates the inequality for one pair. Requires `p >= q + d` and a finite
/// `A(p-q)`; the constant is closed-form for exponential families and a
/// window partial sum otherwise.
pub fn check_vage(
    f: &Series,
    g: &Series,
    weight: &WeightSpec,
    p: i32,
    q: i32,
    d: u32,
) -> Result<InequalityReport> {
    if p < q + d as i32 {
        return Err(Error::Precondition(alloc::format!(
            "check_vage requires p >= q + d (got p={p}, q={q}, d={d})"
        )));
    }
    let order = (p - q) as u32;
    let mode = if weight.supports_closed_form() {
        VageMode::ClosedForm
    } else {
        VageMode::Partial(f.window())
    };
    let constant = weight.vage_constant(order, mode)?;
    let lhs = f.convolve(g)?.norm_p(weight, p)?;
    let rhs = constant * f.norm_p(weight, q)? * g.norm_p(weight, p)?;
    let ratio = if rhs > 0.0 { lhs / rhs } else { f64::INFINITY };
    Ok(InequalityReport {
        lhs,
        rhs,
        ratio,
        holds: ratio <= 1.0 + HOLDS_SLACK,
        p,
        q,
        d,
        constant,
    })
}

/// The monomial ratio `‖x^{n+m}‖_p / (‖x^n‖_q ‖x^m‖_p)
/// = a_{n+m}^{-p/2} a_n^{q/2} a_m^{p/2}`.
///
/// Unbounded growth of this ratio over pairs certifies that no constant
/// `B(p-q)` can close the inequality for the weight.
pub fn monomial_ratio(
    weight: &WeightSpec,
    n: &MultiIndex,
    m: &MultiIndex,
    p: i32,
    q: i32,
) -> Result<f64> {
    let a_sum = weight.eval(&n.add(m))?;
    let a_n = weight.eval(n)?;
    let a_m = weight.eval(m)?;
    let value = libm::pow(a_sum, -(p as f64) / 2.0)
        * libm::pow(a_n, q as f64 / 2.0)
        * libm::pow(a_m, p as f64 / 2.0);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow("monomial ratio"))
    }
}

/// Witness that the Schwartz weight admits no Våge constant.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwartzFailure {
    pub k: u32,
    /// The pair `(k e_1, k e_1)` whose monomial ratio exceeds the target.
    pub witness: (MultiIndex, MultiIndex),
    pub ratio: f64,
    pub probes: u32,
}

/// Doubles `k` until `monomial_ratio(k e_1, k e_1, p, q)` exceeds `target`.
/// Terminates because the ratio grows like `(k+1)^q 2^{-p}`; that requires
/// `q >= 1`.
pub fn demonstrate_schwartz_failure(p: i32, q: i32, target: f64) -> Result<SchwartzFailure> {
    if q < 1 {
        return Err(Error::Precondition(
            "schwartz failure search requires q >= 1".into(),
        ));
    }
    let weight = WeightSpec::Schwartz;
    let mut k = 1u32;
    let mut probes = 0u32;
    loop {
        probes += 1;
        let idx = MultiIndex::single(1, k);
        let ratio = monomial_ratio(&weight, &idx, &idx, p, q)?;
        if ratio > target {
            return Ok(SchwartzFailure {
                k,
                witness: (idx.clone(), idx),
                ratio,
                probes,
            });
        }
        k = k.checked_mul(2).ok_or(Error::Overflow("failure search"))?;
    }
}

/// Partial product `prod_{n<=K} (1 + 1/((2n)^d - 1))`: the Kondratiev
/// `A(d)^2` partial sums. Converges to pi/2 for d = 2 and grows like
/// `sqrt(pi K)` for d = 1.
pub fn zhang_partial(d: u32, max_n: u64) -> f64 {
    assert!(d >= 1, "zhang partial products need d >= 1");
    let mut acc = 1.0f64;
    for n in 1..=max_n {
        let base = crate::weights::powu(2.0 * n as f64, d);
        acc *= 1.0 + 1.0 / (base - 1.0);
    }
    acc
}

/// Deterministic generator for the randomized suites.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Uniform draw from the closed unit disk by rejection.
pub fn unit_disk(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let re = 2.0 * uniform01(rng) - 1.0;
        let im = 2.0 * uniform01(rng) - 1.0;
        if re * re + im * im <= 1.0 {
            return Complex64::new(re, im);
        }
    }
}

/// Dense random series: one unit-disk coefficient per in-window index, drawn
/// in graded-lex order so a seed pins the series exactly.
pub fn random_series(window: TruncationSpec, rng: &mut ChaCha8Rng) -> Series {
    let pairs: alloc::vec::Vec<(MultiIndex, Complex64)> = window
        .enumerate()
        .into_iter()
        .map(|alpha| (alpha, unit_disk(rng)))
        .collect();
    Series::from_terms(pairs, window).expect("enumerated indices are in window")
}

/// Random series rescaled so that `‖f‖_q = 1`, supported on the weight's
/// generator domain (single-generator families get single-generator series
/// regardless of the window's generator count).
pub fn random_unit_norm_series(
    weight: &WeightSpec,
    q: i32,
    window: TruncationSpec,
    rng: &mut ChaCha8Rng,
) -> Result<Series> {
    let indices: alloc::vec::Vec<MultiIndex> = window
        .enumerate()
        .into_iter()
        .filter(|alpha| alpha.entries().iter().all(|&(g, _)| weight.in_domain(g)))
        .collect();
    loop {
        let pairs = indices.iter().map(|alpha| (alpha.clone(), unit_disk(rng)));
        let raw = Series::from_terms(pairs, window).expect("enumerated indices are in window");
        let norm = raw.norm_p(weight, q)?;
        if norm > 1e-6 {
            return Ok(raw.scale(Complex64::new(1.0 / norm, 0.0)));
        }
    }
}

/// Outcome of a seeded randomized inequality suite.
#[derive(Clone, Debug, PartialEq)]
pub struct VageSuiteReport {
    pub trials: u32,
    pub failures: u32,
    pub max_ratio: f64,
    pub seed: u64,
    pub window: TruncationSpec,
    pub p: i32,
    pub q: i32,
    pub d: u32,
    pub constant: f64,
    /// First failing report, when any.
    pub first_failure: Option<InequalityReport>,
}

impl VageSuiteReport {
    pub fn all_hold(&self) -> bool {
        self.failures == 0
    }
}

/// Runs `trials` random pairs with `‖f‖_q = ‖g‖_p = 1` through
/// [`check_vage`].
pub fn vage_random_suite(
    weight: &WeightSpec,
    p: i32,
    q: i32,
    d: u32,
    window: TruncationSpec,
    trials: u32,
    seed: u64,
) -> Result<VageSuiteReport> {
    if p < q + d as i32 {
        return Err(Error::Precondition(alloc::format!(
            "the random suite requires p >= q + d (got p={p}, q={q}, d={d})"
        )));
    }
    let mode = if weight.supports_closed_form() {
        VageMode::ClosedForm
    } else {
        VageMode::Partial(window)
    };
    let constant = weight.vage_constant((p - q) as u32, mode)?;
    let mut rng = seeded_rng(seed);
    let mut max_ratio = 0.0f64;
    let mut failures = 0u32;
    let mut first_failure = None;
    for _ in 0..trials {
        let f = random_unit_norm_series(weight, q, window, &mut rng)?;
        let g = random_unit_norm_series(weight, p, window, &mut rng)?;
        let report = check_vage(&f, &g, weight, p, q, d)?;
        max_ratio = max_ratio.max(report.ratio);
        if !report.holds {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(report);
            }
        }
    }
    Ok(VageSuiteReport {
        trials,
        failures,
        max_ratio,
        seed,
        window,
        p,
        q,
        d,
        constant,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn check_vage_hand_example() {
        // kondratiev, f = g = 1 + x1, q = 1, p = 3:
        // lhs = sqrt(1 + 4/8 + 1/64), rhs = sqrt(pi/2) sqrt(3/2) sqrt(9/8)
        let win = TruncationSpec::new(1, 2);
        let f = Series::from_terms(
            [
                (MultiIndex::zero(), Complex64::new(1.0, 0.0)),
                (MultiIndex::unit(1), Complex64::new(1.0, 0.0)),
            ],
            win,
        )
        .unwrap();
        let report = check_vage(&f, &f, &WeightSpec::Kondratiev, 3, 1, 2).unwrap();
        assert!(report.holds);
        assert!((report.lhs - 1.2311).abs() < 1e-4, "lhs {}", report.lhs);
        assert!((report.rhs - 1.6281).abs() < 1e-4, "rhs {}", report.rhs);
        assert!((report.constant - libm::sqrt(PI / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn check_vage_unit_always_holds() {
        let win = TruncationSpec::new(2, 3);
        let mut rng = seeded_rng(7);
        let g = random_series(win, &mut rng);
        let one = Series::one(win);
        let report = check_vage(&one, &g, &WeightSpec::Kondratiev, 3, 1, 2).unwrap();
        assert!(report.holds);
        // ‖1‖_q = 1 and A >= 1, so the ratio is at most 1/A
        assert!(report.ratio <= 1.0 / report.constant + 1e-12);
    }

    #[test]
    fn check_vage_uses_partial_constants_for_nonexponential_weights() {
        // the Schwartz family has no closed form; the report carries the
        // window partial sum as a lower-bound constant
        let win = TruncationSpec::new(1, 4);
        let mut rng = seeded_rng(3);
        let w = WeightSpec::Schwartz;
        let f = random_unit_norm_series(&w, 1, win, &mut rng).unwrap();
        let g = random_unit_norm_series(&w, 3, win, &mut rng).unwrap();
        let report = check_vage(&f, &g, &w, 3, 1, 1).unwrap();
        assert!(report.constant >= 1.0);
        assert!(report.ratio > 0.0);
    }

    #[test]
    fn check_vage_precondition() {
        let win = TruncationSpec::new(1, 1);
        let one = Series::one(win);
        assert!(matches!(
            check_vage(&one, &one, &WeightSpec::Kondratiev, 2, 1, 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn monomial_ratio_schwartz_values() {
        let w = WeightSpec::Schwartz;
        let e1 = MultiIndex::unit(1);
        // ((n+1)^q (m+1)^p) / (n+m+1)^p with n = m = 1: 2 * 8 / 27
        let r = monomial_ratio(&w, &e1, &e1, 3, 1).unwrap();
        assert!((r - 16.0 / 27.0).abs() < 1e-12);
        assert!((r - 0.5926).abs() < 1e-4);
        // closed-form ratio 80^4 / 159^3 at n = m = 79
        let k = MultiIndex::single(1, 79);
        let r79 = monomial_ratio(&w, &k, &k, 3, 1).unwrap();
        let expected = libm::pow(80.0, 4.0) / libm::pow(159.0, 3.0);
        assert!((r79 - expected).abs() < 1e-9);
        assert!(r79 > 10.0);
    }

    #[test]
    fn monomial_ratio_exponential_is_bounded_by_one() {
        let w = WeightSpec::Kondratiev;
        let n = MultiIndex::from_pairs([(1, 2), (3, 1)]);
        let m = MultiIndex::from_pairs([(2, 1), (3, 2)]);
        for (p, q) in [(2, 2), (3, 1), (5, 2)] {
            let r = monomial_ratio(&w, &n, &m, p, q).unwrap();
            assert!(r <= 1.0 + 1e-12, "ratio {r} at p={p}, q={q}");
        }
    }

    #[test]
    fn schwartz_failure_search() {
        // any prescribed bound is eventually defeated
        for target in [1.0, 10.0, 100.0, 1000.0] {
            let hit = demonstrate_schwartz_failure(3, 1, target).unwrap();
            assert!(hit.ratio > target);
        }
        let hit = demonstrate_schwartz_failure(3, 1, 10.0).unwrap();
        assert!(hit.k <= 128); // k = 79 suffices; doubling reaches 128
        let small = demonstrate_schwartz_failure(2, 1, 1.0).unwrap();
        assert!(small.k <= 8, "k = {}", small.k);
        let trivial = demonstrate_schwartz_failure(3, 1, 0.0).unwrap();
        assert_eq!(trivial.k, 1);
        assert!(matches!(
            demonstrate_schwartz_failure(3, 0, 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn zhang_partial_values() {
        // hand product (4/3)(16/15)(36/35)
        let p3 = zhang_partial(2, 3);
        assert!((p3 - 2304.0 / 1575.0).abs() < 1e-12);
        assert!((p3 - 1.46286).abs() < 1e-5);
        // d = 1 diverges like sqrt(pi K)
        let p100 = zhang_partial(1, 100);
        assert!((p100 - libm::sqrt(100.0 * PI)).abs() / p100 < 0.02);
        let p10k = zhang_partial(1, 10_000);
        assert!((p10k - libm::sqrt(10_000.0 * PI)).abs() / p10k < 0.02);
        assert!(p10k > 100.0);
    }

    #[test]
    fn zhang_partial_increasing_and_bounded_for_d2() {
        let mut last = 0.0;
        for k in [10u64, 100, 1000, 10_000] {
            let v = zhang_partial(2, k);
            assert!(v > last);
            assert!(v <= PI / 2.0 * (1.0 + 1e-12));
            last = v;
        }
    }

    #[test]
    fn random_series_is_seed_reproducible() {
        let win = TruncationSpec::new(2, 2);
        let a = random_series(win, &mut seeded_rng(99));
        let b = random_series(win, &mut seeded_rng(99));
        assert_eq!(a, b);
        assert_eq!(a.term_count(), win.index_count() as usize);
    }

    #[test]
    fn small_random_suites_hold() {
        let win = TruncationSpec::new(3, 4);
        let kond = vage_random_suite(&WeightSpec::Kondratiev, 3, 1, 2, win, 50, 11).unwrap();
        assert!(kond.all_hold(), "max ratio {}", kond.max_ratio);
        let gsp = vage_random_suite(
            &WeightSpec::GSpace,
            2,
            1,
            1,
            TruncationSpec::new(1, 6),
            50,
            12,
        )
        .unwrap();
        assert!(gsp.all_hold());
        assert!((gsp.constant - libm::sqrt(2.0)).abs() < 1e-12);
    }
}
