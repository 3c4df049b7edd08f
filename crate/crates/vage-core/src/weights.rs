//! Admissible weight families `a: l_A -> R_+`, their classification
//! (admissible / d-regular / superexponential / exponential) and the
//! constants `A(d) = (sum_alpha a_alpha^{-d})^{1/2}`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monoid::{MultiIndex, TruncationSpec};

/// Relative slack absorbing floating rounding in the superexponential
/// inequality checks; the underlying inequalities are exact.
pub const INEQUALITY_SLACK: f64 = 1e-12;

/// Tail tolerance for truncating closed-form infinite products.
pub const PRODUCT_TAIL_TOLERANCE: f64 = 1e-12;

/// A positive function on the monoid, given by family plus parameters.
///
/// Evaluation is `a_0 = 1` at the identity for every family. Single-generator
/// families (`Schwartz`, `GSpace`, `DoublyExponential`, `Power`) live on the
/// monoid generated by `x_1` alone; `Kondratiev` has unbounded generator set;
/// `CustomGenerators` carries one weight per listed generator; `Tensor`
/// interleaves two families over odd/even generators.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    /// `a_n = (n + 1)^2` on the single-generator monoid.
    Schwartz,
    /// `a_n = 2^n` on the single-generator monoid.
    GSpace,
    /// `a_alpha = (2N)^alpha = 2^{alpha_1} 4^{alpha_2} 6^{alpha_3} ...`
    Kondratiev,
    /// `a_0 = 1`, `a_n = 2^(2^n)` on the single-generator monoid.
    DoublyExponential,
    /// `a_n = c^n` on the single-generator monoid.
    Power { c: f64 },
    /// Exponential weight `a_alpha = prod w_n^{alpha_n}` over finitely many
    /// generators.
    CustomGenerators { weights: Vec<f64> },
    /// Interleaved product weight: generator `2k-1` carries `left`'s k-th
    /// generator, generator `2k` carries `right`'s k-th.
    Tensor {
        left: Box<WeightSpec>,
        right: Box<WeightSpec>,
    },
}

/// Known analytic classification of a family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WeightClass {
    Exponential,
    Superexponential,
    NotSuperexponential,
}

/// Outcome of the admissibility probe `a_0 = 1`, `a_{e_n} > 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub unit_value: f64,
    /// Generators (with their weights) failing `a_{e_n} > 1`.
    pub violations: Vec<(u32, f64)>,
    pub max_generator_probed: u32,
}

/// Outcome of the finite superexponential probe over a window.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperexponentialReport {
    pub ok: bool,
    /// First violating pair in graded-lex order, when any.
    pub witness: Option<(MultiIndex, MultiIndex)>,
    pub window: TruncationSpec,
    pub pairs_checked: u64,
    /// Analytic classification when the family is a known one.
    pub known_class: Option<WeightClass>,
}

/// Evaluation mode for the constant `A(d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VageMode {
    /// Infinite-sum value via the product formula; exponential families only.
    ClosedForm,
    /// Lower bound: sum restricted to the window.
    Partial(TruncationSpec),
}

impl WeightSpec {
    /// Interleaved tensor weight of two families.
    pub fn tensor(left: WeightSpec, right: WeightSpec) -> WeightSpec {
        WeightSpec::Tensor {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            WeightSpec::Schwartz => "schwartz",
            WeightSpec::GSpace => "gspace",
            WeightSpec::Kondratiev => "kondratiev",
            WeightSpec::DoublyExponential => "doubly_exponential",
            WeightSpec::Power { .. } => "power",
            WeightSpec::CustomGenerators { .. } => "custom_generators",
            WeightSpec::Tensor { .. } => "tensor",
        }
    }

    /// Whether the generator index belongs to the family's generator set.
    pub fn in_domain(&self, generator: u32) -> bool {
        if generator == 0 {
            return false;
        }
        match self {
            WeightSpec::Schwartz
            | WeightSpec::GSpace
            | WeightSpec::DoublyExponential
            | WeightSpec::Power { .. } => generator == 1,
            WeightSpec::Kondratiev => true,
            WeightSpec::CustomGenerators { weights } => (generator as usize) <= weights.len(),
            WeightSpec::Tensor { left, right } => {
                if generator % 2 == 1 {
                    left.in_domain(generator.div_ceil(2))
                } else {
                    right.in_domain(generator / 2)
                }
            }
        }
    }

    /// `a_{e_n}` for an in-domain generator.
    pub fn generator_weight(&self, generator: u32) -> Result<f64> {
        if !self.in_domain(generator) {
            return Err(Error::GeneratorOutOfDomain {
                family: self.family_name(),
                generator,
            });
        }
        Ok(match self {
            WeightSpec::Schwartz => 4.0,
            WeightSpec::GSpace => 2.0,
            WeightSpec::DoublyExponential => 4.0,
            WeightSpec::Power { c } => *c,
            WeightSpec::Kondratiev => 2.0 * generator as f64,
            WeightSpec::CustomGenerators { weights } => weights[generator as usize - 1],
            WeightSpec::Tensor { left, right } => {
                if generator % 2 == 1 {
                    left.generator_weight(generator.div_ceil(2))?
                } else {
                    right.generator_weight(generator / 2)?
                }
            }
        })
    }

    /// `a_alpha`. Errors on generators outside the family's domain and on
    /// floating overflow.
    pub fn eval(&self, alpha: &MultiIndex) -> Result<f64> {
        for &(g, _) in alpha.entries() {
            if !self.in_domain(g) {
                return Err(Error::GeneratorOutOfDomain {
                    family: self.family_name(),
                    generator: g,
                });
            }
        }
        let v = self.eval_raw(alpha);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow("weight evaluation"))
        }
    }

    /// Evaluation without domain/overflow policing; callers must have
    /// checked the domain. Overflow propagates as infinity.
    fn eval_raw(&self, alpha: &MultiIndex) -> f64 {
        match self {
            WeightSpec::Schwartz => {
                let n = alpha.exponent(1) as f64;
                (n + 1.0) * (n + 1.0)
            }
            WeightSpec::GSpace => libm::exp2(alpha.exponent(1) as f64),
            WeightSpec::DoublyExponential => {
                let n = alpha.exponent(1);
                if n == 0 {
                    1.0
                } else {
                    libm::exp2(libm::exp2(n as f64))
                }
            }
            WeightSpec::Power { c } => libm::pow(*c, alpha.exponent(1) as f64),
            WeightSpec::Kondratiev => alpha
                .entries()
                .iter()
                .map(|&(g, e)| libm::pow(2.0 * g as f64, e as f64))
                .product(),
            WeightSpec::CustomGenerators { weights } => alpha
                .entries()
                .iter()
                .map(|&(g, e)| libm::pow(weights[g as usize - 1], e as f64))
                .product(),
            WeightSpec::Tensor { left, right } => {
                let (la, ra) = tensor_split(alpha);
                left.eval_raw(&la) * right.eval_raw(&ra)
            }
        }
    }

    /// Checks `a_0 = 1` exactly and `a_{e_n} > 1` for every in-domain
    /// generator up to the probe bound.
    pub fn is_admissible(&self, probe: &TruncationSpec) -> AdmissibilityReport {
        let unit_value = self.eval_raw(&MultiIndex::zero());
        let mut violations = Vec::new();
        for n in 1..=probe.max_generator {
            if !self.in_domain(n) {
                continue;
            }
            let w = self.generator_weight(n).unwrap_or(f64::NAN);
            if !(w > 1.0) {
                violations.push((n, w));
            }
        }
        AdmissibilityReport {
            ok: unit_value == 1.0 && violations.is_empty(),
            unit_value,
            violations,
            max_generator_probed: probe.max_generator,
        }
    }

    /// Partial sum `sum_{n <= K} 1 / (a_{e_n}^d - 1)` over in-domain
    /// generators. Doubles as the nuclearity trace partial sum with
    /// `d = q - p`. For tensor weights the sum is delegated to the parts so
    /// additivity over the odd/even split is bit-exact.
    pub fn regularity_sum(&self, d: u32, max_generator: u32) -> Result<f64> {
        if d == 0 {
            return Err(Error::Precondition(
                "regularity order d must be >= 1".into(),
            ));
        }
        if let WeightSpec::Tensor { left, right } = self {
            // odd generators 2k-1 <= K and even generators 2k <= K
            let left_sum = left.regularity_sum(d, max_generator.div_ceil(2))?;
            let right_sum = right.regularity_sum(d, max_generator / 2)?;
            return Ok(left_sum + right_sum);
        }
        let mut acc = 0.0f64;
        for n in 1..=max_generator {
            if !self.in_domain(n) {
                continue;
            }
            let w = self.generator_weight(n)?;
            if !(w > 1.0) {
                return Err(Error::NotAdmissible {
                    generator: n,
                    weight: w,
                });
            }
            acc += 1.0 / (powu(w, d) - 1.0);
        }
        Ok(acc)
    }

    /// Tests `a_alpha a_beta <= a_{alpha+beta}` for all in-window, in-domain
    /// pairs; on failure reports the first witness pair in graded-lex order.
    pub fn check_superexponential(&self, probe: &TruncationSpec) -> SuperexponentialReport {
        let indices: Vec<MultiIndex> = probe
            .enumerate()
            .into_iter()
            .filter(|a| a.entries().iter().all(|&(g, _)| self.in_domain(g)))
            .collect();
        let values: Vec<f64> = indices.iter().map(|a| self.eval_raw(a)).collect();
        let mut pairs_checked = 0u64;
        for (i, alpha) in indices.iter().enumerate() {
            for (j, beta) in indices.iter().enumerate() {
                pairs_checked += 1;
                let lhs = values[i] * values[j];
                let rhs = self.eval_raw(&alpha.add(beta));
                if lhs > rhs * (1.0 + INEQUALITY_SLACK) {
                    return SuperexponentialReport {
                        ok: false,
                        witness: Some((alpha.clone(), beta.clone())),
                        window: *probe,
                        pairs_checked,
                        known_class: self.known_class(),
                    };
                }
            }
        }
        SuperexponentialReport {
            ok: true,
            witness: None,
            window: *probe,
            pairs_checked,
            known_class: self.known_class(),
        }
    }

    /// Analytic classification, when known. `None` for parameterized families
    /// with out-of-range parameters.
    pub fn known_class(&self) -> Option<WeightClass> {
        match self {
            WeightSpec::Schwartz => Some(WeightClass::NotSuperexponential),
            WeightSpec::GSpace | WeightSpec::Kondratiev => Some(WeightClass::Exponential),
            WeightSpec::DoublyExponential => Some(WeightClass::Superexponential),
            WeightSpec::Power { c } => (*c > 1.0).then_some(WeightClass::Exponential),
            WeightSpec::CustomGenerators { weights } => weights
                .iter()
                .all(|&w| w > 1.0)
                .then_some(WeightClass::Exponential),
            WeightSpec::Tensor { left, right } => {
                match (left.known_class()?, right.known_class()?) {
                    (WeightClass::NotSuperexponential, _)
                    | (_, WeightClass::NotSuperexponential) => {
                        Some(WeightClass::NotSuperexponential)
                    }
                    (WeightClass::Exponential, WeightClass::Exponential) => {
                        Some(WeightClass::Exponential)
                    }
                    _ => Some(WeightClass::Superexponential),
                }
            }
        }
    }

    /// Closed-form constants exist exactly for the exponential families.
    pub fn supports_closed_form(&self) -> bool {
        self.known_class() == Some(WeightClass::Exponential)
    }

    /// Smallest order `d` for which `sum_alpha a_alpha^{-d}` converges,
    /// determined structurally per family.
    pub fn min_convergent_order(&self) -> u32 {
        match self {
            WeightSpec::Kondratiev => 2,
            WeightSpec::Tensor { left, right } => left
                .min_convergent_order()
                .max(right.min_convergent_order()),
            _ => 1,
        }
    }

    /// The constant `A(d) = (sum_alpha a_alpha^{-d})^{1/2}`.
    ///
    /// Closed form multiplies `1 / (1 - a_{e_n}^{-d})` over the generator
    /// set (exponential families only); partial mode sums the window and is
    /// a nondecreasing lower bound. Divergent orders are rejected
    /// structurally.
    pub fn vage_constant(&self, d: u32, mode: VageMode) -> Result<f64> {
        if d == 0 {
            return Err(Error::Precondition("constant order d must be >= 1".into()));
        }
        self.require_admissible_generators()?;
        let required = self.min_convergent_order();
        if d < required {
            return Err(Error::Divergent { d, required });
        }
        match mode {
            VageMode::ClosedForm => {
                if !self.supports_closed_form() {
                    return Err(Error::ClosedFormUnsupported);
                }
                Ok(libm::sqrt(self.closed_form_squared(d)))
            }
            VageMode::Partial(window) => {
                let mut acc = 0.0f64;
                for alpha in window.enumerate() {
                    if !alpha.entries().iter().all(|&(g, _)| self.in_domain(g)) {
                        continue;
                    }
                    let a = self.eval_raw(&alpha);
                    acc += 1.0 / powu(a, d);
                }
                Ok(libm::sqrt(acc))
            }
        }
    }

    /// `A(d)^2` for exponential families, factored over disjoint generator
    /// sets so tensor constants are exactly the product of the parts'.
    fn closed_form_squared(&self, d: u32) -> f64 {
        match self {
            WeightSpec::GSpace => 1.0 / (1.0 - libm::exp2(-(d as f64))),
            WeightSpec::Power { c } => 1.0 / (1.0 - libm::pow(*c, -(d as f64))),
            WeightSpec::CustomGenerators { weights } => weights
                .iter()
                .map(|&w| 1.0 / (1.0 - libm::pow(w, -(d as f64))))
                .product(),
            WeightSpec::Kondratiev => kondratiev_closed_squared(d),
            WeightSpec::Tensor { left, right } => {
                left.closed_form_squared(d) * right.closed_form_squared(d)
            }
            // unreachable behind supports_closed_form
            WeightSpec::Schwartz | WeightSpec::DoublyExponential => f64::NAN,
        }
    }

    /// Errors when any in-domain generator of a finitely-generated part has
    /// weight <= 1; the infinite Kondratiev set is admissible by form.
    fn require_admissible_generators(&self) -> Result<()> {
        match self {
            WeightSpec::Kondratiev
            | WeightSpec::Schwartz
            | WeightSpec::GSpace
            | WeightSpec::DoublyExponential => Ok(()),
            WeightSpec::Power { c } => {
                if *c > 1.0 {
                    Ok(())
                } else {
                    Err(Error::NotAdmissible {
                        generator: 1,
                        weight: *c,
                    })
                }
            }
            WeightSpec::CustomGenerators { weights } => {
                for (i, &w) in weights.iter().enumerate() {
                    if !(w > 1.0) {
                        return Err(Error::NotAdmissible {
                            generator: i as u32 + 1,
                            weight: w,
                        });
                    }
                }
                Ok(())
            }
            WeightSpec::Tensor { left, right } => {
                left.require_admissible_generators()?;
                right.require_admissible_generators()
            }
        }
    }
}

/// Splits a multi-index over interleaved generators into the left (odd) and
/// right (even) projections, renumbered to the parts' generator sets.
pub fn tensor_split(alpha: &MultiIndex) -> (MultiIndex, MultiIndex) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &(g, e) in alpha.entries() {
        if g % 2 == 1 {
            left.push((g.div_ceil(2), e));
        } else {
            right.push((g / 2, e));
        }
    }
    (MultiIndex::from_pairs(left), MultiIndex::from_pairs(right))
}

/// Integer power by binary exponentiation; exact whenever all intermediate
/// squares are exactly representable (in particular for the small integer
/// weights and orders the reports use).
pub(crate) fn powu(base: f64, exp: u32) -> f64 {
    let mut acc = 1.0f64;
    let mut square = base;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= square;
        }
        square *= square;
        e >>= 1;
    }
    acc
}

/// `A(d)^2` for the Kondratiev weight:
/// `prod_n 1/(1 - (2n)^{-d}) = exp(sum_{m>=1} 2^{-md} zeta(md) / m)`.
///
/// The exponential-sum route reaches the infinite-product value to machine
/// precision, well inside the `PRODUCT_TAIL_TOLERANCE` budget that a bare
/// partial product could only meet after ~10^11 factors for d = 2.
fn kondratiev_closed_squared(d: u32) -> f64 {
    debug_assert!(d >= 2);
    let mut log_sum = 0.0f64;
    for m in 1..=256u32 {
        let s = m as f64 * d as f64;
        let term = libm::exp2(-s) * riemann_zeta(s) / m as f64;
        log_sum += term;
        if term < 1e-18 {
            break;
        }
    }
    libm::exp(log_sum)
}

/// Riemann zeta for real `s >= 2` by Euler-Maclaurin with a 1000-term head.
fn riemann_zeta(s: f64) -> f64 {
    let n = 1000.0f64;
    let mut head = 0.0f64;
    let mut k = 1.0f64;
    while k <= n {
        head += libm::pow(k, -s);
        k += 1.0;
    }
    let tail = libm::pow(n, 1.0 - s) / (s - 1.0) - 0.5 * libm::pow(n, -s)
        + s * libm::pow(n, -s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * libm::pow(n, -s - 3.0) / 720.0
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * libm::pow(n, -s - 5.0) / 30240.0;
    head + tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn e(n: u32) -> MultiIndex {
        MultiIndex::unit(n)
    }

    #[test]
    fn zeta_reference_values() {
        assert!((riemann_zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((riemann_zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-14);
    }

    #[test]
    fn eval_examples() {
        // (2N)^alpha = 2^{a1} 4^{a2} ...
        let w = WeightSpec::Kondratiev;
        assert_eq!(w.eval(&e(1).add(&e(2))).unwrap(), 8.0);
        for w in [
            WeightSpec::Schwartz,
            WeightSpec::GSpace,
            WeightSpec::Kondratiev,
            WeightSpec::DoublyExponential,
            WeightSpec::Power { c: 3.0 },
        ] {
            assert_eq!(w.eval(&MultiIndex::zero()).unwrap(), 1.0);
        }
        assert_eq!(
            WeightSpec::Schwartz
                .eval(&MultiIndex::single(1, 3))
                .unwrap(),
            16.0
        );
    }

    #[test]
    fn eval_domain_errors() {
        assert!(matches!(
            WeightSpec::Schwartz.eval(&e(2)),
            Err(Error::GeneratorOutOfDomain { generator: 2, .. })
        ));
        assert!(matches!(
            WeightSpec::CustomGenerators { weights: vec![1.5] }.eval(&e(2)),
            Err(Error::GeneratorOutOfDomain { .. })
        ));
        // 2^(2^40) overflows
        assert!(matches!(
            WeightSpec::DoublyExponential.eval(&MultiIndex::single(1, 40)),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn admissibility_reports() {
        let probe = TruncationSpec::new(5, 1);
        assert!(WeightSpec::Kondratiev.is_admissible(&probe).ok);
        assert!(WeightSpec::GSpace.is_admissible(&probe).ok);
        let bad = WeightSpec::CustomGenerators { weights: vec![0.5] };
        let report = bad.is_admissible(&probe);
        assert!(!report.ok);
        assert_eq!(report.violations, vec![(1, 0.5)]);
    }

    #[test]
    fn regularity_sums() {
        // single generator: 1/(4-1)
        let s = WeightSpec::Schwartz.regularity_sum(1, 7).unwrap();
        assert!((s - 1.0 / 3.0).abs() < 1e-15);
        // hand sum 1/3 + 1/15 + 1/35
        let k = WeightSpec::Kondratiev.regularity_sum(2, 3).unwrap();
        let expected = 1.0 / 3.0 + 1.0 / 15.0 + 1.0 / 35.0;
        assert!((k - expected).abs() < 1e-15);
        assert!((k - 0.42857).abs() < 1e-5);
        // d = 1 partial sums grow without bound (harmonic-like)
        let s100 = WeightSpec::Kondratiev.regularity_sum(1, 100).unwrap();
        let s1000 = WeightSpec::Kondratiev.regularity_sum(1, 1000).unwrap();
        assert!(s1000 > s100 + 1.0);
        // not admissible
        assert!(matches!(
            WeightSpec::Power { c: 0.9 }.regularity_sum(1, 1),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn superexponential_probe() {
        let probe = TruncationSpec::new(3, 3);
        // (n+1)^2 (m+1)^2 > (n+m+1)^2 already at n = m = 1: 16 > 9
        let report = WeightSpec::Schwartz.check_superexponential(&probe);
        assert!(!report.ok);
        assert_eq!(report.witness, Some((e(1), e(1))));
        assert!(WeightSpec::GSpace.check_superexponential(&probe).ok);
        assert!(WeightSpec::Kondratiev.check_superexponential(&probe).ok);
        assert!(
            WeightSpec::DoublyExponential
                .check_superexponential(&TruncationSpec::new(1, 4))
                .ok
        );
    }

    #[test]
    fn vage_constant_gspace_geometric() {
        // A(1)^2 = sum 2^{-n} = 2 (geometric series oracle)
        let a = WeightSpec::GSpace
            .vage_constant(1, VageMode::ClosedForm)
            .unwrap();
        assert!((a * a - 2.0).abs() < 1e-14);
    }

    #[test]
    fn vage_constant_kondratiev_wallis() {
        // A(2)^2 = prod 4n^2/(4n^2-1) = pi/2; oracle: partial products.
        let a = WeightSpec::Kondratiev
            .vage_constant(2, VageMode::ClosedForm)
            .unwrap();
        assert!((a * a - PI / 2.0).abs() < 1e-12, "{}", a * a);
        let mut wallis = 1.0f64;
        for n in 1..=1_000_000u64 {
            let sq = 4.0 * (n as f64) * (n as f64);
            wallis *= sq / (sq - 1.0);
        }
        assert!((a * a - wallis).abs() < 1e-5);
    }

    #[test]
    fn vage_constant_divergence() {
        assert_eq!(
            WeightSpec::Kondratiev.vage_constant(1, VageMode::ClosedForm),
            Err(Error::Divergent { d: 1, required: 2 })
        );
        assert_eq!(
            WeightSpec::Kondratiev.vage_constant(1, VageMode::Partial(TruncationSpec::new(3, 3))),
            Err(Error::Divergent { d: 1, required: 2 })
        );
        assert_eq!(
            WeightSpec::Schwartz.vage_constant(1, VageMode::ClosedForm),
            Err(Error::ClosedFormUnsupported)
        );
    }

    #[test]
    fn vage_constant_partial_monotone_below_closed() {
        let w = WeightSpec::Kondratiev;
        let closed = w.vage_constant(2, VageMode::ClosedForm).unwrap();
        let mut last = 0.0;
        for n in 1..=5u32 {
            let part = w
                .vage_constant(2, VageMode::Partial(TruncationSpec::new(n, n)))
                .unwrap();
            assert!(part >= last);
            assert!(part <= closed * (1.0 + 1e-12));
            last = part;
        }
        assert!(last > 1.0);
    }

    #[test]
    fn tensor_interleaving() {
        let c = WeightSpec::tensor(WeightSpec::GSpace, WeightSpec::GSpace);
        assert_eq!(c.eval(&e(1)).unwrap(), 2.0);
        assert_eq!(c.eval(&e(2)).unwrap(), 2.0);
        let kg = WeightSpec::tensor(WeightSpec::Kondratiev, WeightSpec::GSpace);
        assert_eq!(kg.eval(&e(1)).unwrap(), 2.0);
        assert_eq!(kg.eval(&e(2)).unwrap(), 2.0);
        assert_eq!(kg.eval(&e(3)).unwrap(), 4.0);
        // product rule on e1 + e2
        assert_eq!(kg.eval(&e(1).add(&e(2))).unwrap(), 4.0);
        // gspace occupies a single right generator; e4 is out of domain
        assert!(kg.eval(&e(4)).is_err());
    }

    #[test]
    fn tensor_regularity_additivity_is_exact() {
        let a = WeightSpec::Kondratiev;
        let b = WeightSpec::GSpace;
        let c = WeightSpec::tensor(a.clone(), b.clone());
        let sum_c = c.regularity_sum(2, 20).unwrap();
        let split = a.regularity_sum(2, 10).unwrap() + b.regularity_sum(2, 10).unwrap();
        assert_eq!(sum_c, split);
    }

    #[test]
    fn tensor_constant_factorizes() {
        let a = WeightSpec::Kondratiev;
        let b = WeightSpec::GSpace;
        let c = WeightSpec::tensor(a.clone(), b.clone());
        let ca = a.vage_constant(2, VageMode::ClosedForm).unwrap();
        let cb = b.vage_constant(2, VageMode::ClosedForm).unwrap();
        let cc = c.vage_constant(2, VageMode::ClosedForm).unwrap();
        assert!((cc - ca * cb).abs() <= 1e-10 * cc);
        // (pi/2) * (4/3)
        assert!((cc * cc - PI / 2.0 * 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn classification_metadata() {
        assert_eq!(
            WeightSpec::Schwartz.known_class(),
            Some(WeightClass::NotSuperexponential)
        );
        assert_eq!(
            WeightSpec::DoublyExponential.known_class(),
            Some(WeightClass::Superexponential)
        );
        assert_eq!(
            WeightSpec::tensor(WeightSpec::GSpace, WeightSpec::Kondratiev).known_class(),
            Some(WeightClass::Exponential)
        );
        assert_eq!(
            WeightSpec::tensor(WeightSpec::DoublyExponential, WeightSpec::Kondratiev).known_class(),
            Some(WeightClass::Superexponential)
        );
        assert_eq!(WeightSpec::Power { c: 0.5 }.known_class(), None);
    }
}
