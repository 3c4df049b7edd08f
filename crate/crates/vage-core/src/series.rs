//! Ring elements `f = sum f_alpha x^alpha`: sparse truncated series with
//! convolution, weighted norms, expectation, powers, inversion, composition
//! and formal derivations.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::monoid::{MultiIndex, TruncationSpec};
use crate::weights::WeightSpec;

/// Per-coefficient absolute tolerance for series equality.
pub const COEFF_EQ_TOLERANCE: f64 = 1e-14;

/// Coefficients below this magnitude are dropped on construction (subnormal
/// guard); nothing larger is ever pruned so the algebra laws stay exact.
pub const COEFF_DROP_THRESHOLD: f64 = 1e-300;

/// Invertibility threshold on `|E[f]|`.
pub const INVERTIBILITY_THRESHOLD: f64 = 1e-300;

/// Increment threshold for the scalar tails of compositions.
pub const TAIL_INCREMENT_TOLERANCE: f64 = 1e-15;

/// Term budget for those scalar tails.
pub const TAIL_TERM_BUDGET: u64 = 1_000_000;

/// A sparse complex series truncated to a window.
///
/// Every stored index is in-window and every stored coefficient is nonzero.
/// Iteration order is graded-lexicographic. Values are immutable after
/// construction; all operations are pure.
#[derive(Clone, Debug)]
pub struct Series {
    window: TruncationSpec,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl Series {
    pub fn zero(window: TruncationSpec) -> Self {
        Series {
            window,
            terms: BTreeMap::new(),
        }
    }

    /// The ring unit.
    pub fn one(window: TruncationSpec) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), window)
    }

    pub fn constant(c: Complex64, window: TruncationSpec) -> Self {
        let mut terms = BTreeMap::new();
        if c.norm() >= COEFF_DROP_THRESHOLD {
            terms.insert(MultiIndex::zero(), c);
        }
        Series { window, terms }
    }

    /// Single-term series `c * x^alpha`; `alpha` must be in window.
    pub fn monomial(alpha: MultiIndex, c: Complex64, window: TruncationSpec) -> Result<Self> {
        if !window.contains(&alpha) {
            return Err(Error::OutOfWindow {
                index: alpha,
                window,
            });
        }
        let mut terms = BTreeMap::new();
        if c.norm() >= COEFF_DROP_THRESHOLD {
            terms.insert(alpha, c);
        }
        Ok(Series { window, terms })
    }

    /// Builds a series from coefficient pairs, summing duplicates.
    pub fn from_terms(
        pairs: impl IntoIterator<Item = (MultiIndex, Complex64)>,
        window: TruncationSpec,
    ) -> Result<Self> {
        let mut terms: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (alpha, c) in pairs {
            if !window.contains(&alpha) {
                return Err(Error::OutOfWindow {
                    index: alpha,
                    window,
                });
            }
            *terms.entry(alpha).or_insert(Complex64::ZERO) += c;
        }
        Ok(Self::from_map(terms, window))
    }

    fn from_map(mut terms: BTreeMap<MultiIndex, Complex64>, window: TruncationSpec) -> Self {
        terms.retain(|_, c| c.norm() >= COEFF_DROP_THRESHOLD);
        Series { window, terms }
    }

    pub fn window(&self) -> TruncationSpec {
        self.window
    }

    /// Stored terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^alpha` (zero when absent).
    pub fn coefficient(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or(Complex64::ZERO)
    }

    /// The generalized expectation `E[f] = f_0`; the unique unital ring
    /// homomorphism to the scalars.
    pub fn expectation(&self) -> Complex64 {
        self.coefficient(&MultiIndex::zero())
    }

    /// Largest stored coefficient magnitude (0 for the zero series).
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_window(&self, other: &Series) -> Result<()> {
        if self.window == other.window {
            Ok(())
        } else {
            Err(Error::WindowMismatch {
                left: self.window,
                right: other.window,
            })
        }
    }

    /// Convolution product `(fg)_gamma = sum_{beta <= gamma} f_beta g_{gamma-beta}`.
    ///
    /// Truncation is exact: in-window output coefficients depend only on
    /// in-window input coefficients because degrees add. Summation order per
    /// output index is fixed by the graded-lex term order, so results are
    /// deterministic.
    pub fn convolve(&self, rhs: &Series) -> Result<Series> {
        self.check_window(rhs)?;
        let max_degree = self.window.max_degree as u64;
        let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (alpha, &ca) in &self.terms {
            let da = alpha.total_degree();
            for (beta, &cb) in &rhs.terms {
                if da + beta.total_degree() > max_degree {
                    break; // graded order: all later terms are larger still
                }
                *acc.entry(alpha.add(beta)).or_insert(Complex64::ZERO) += ca * cb;
            }
        }
        Ok(Self::from_map(acc, self.window))
    }

    /// Termwise `c1 * f + c2 * g`.
    pub fn linear_combine(c1: Complex64, f: &Series, c2: Complex64, g: &Series) -> Result<Series> {
        f.check_window(g)?;
        let mut acc = BTreeMap::new();
        for (alpha, &c) in &f.terms {
            acc.insert(alpha.clone(), c1 * c);
        }
        for (alpha, &c) in &g.terms {
            *acc.entry(alpha.clone()).or_insert(Complex64::ZERO) += c2 * c;
        }
        Ok(Self::from_map(acc, f.window))
    }

    /// Termwise scalar multiple.
    pub fn scale(&self, c: Complex64) -> Series {
        let terms = self
            .terms
            .iter()
            .map(|(a, &v)| (a.clone(), c * v))
            .collect();
        Self::from_map(terms, self.window)
    }

    /// Weighted norm `(sum |f_alpha|^2 a_alpha^{-p})^{1/2}` over the stored
    /// terms. Negative `p` gives the test-function norms with weight `a^{-p}`.
    pub fn norm_p(&self, weight: &WeightSpec, p: i32) -> Result<f64> {
        let mut acc = 0.0f64;
        for (alpha, c) in &self.terms {
            let a = weight.eval(alpha)?;
            acc += c.norm_sqr() * powi(a, -p);
        }
        if acc.is_finite() {
            Ok(libm::sqrt(acc))
        } else {
            Err(Error::Overflow("weighted norm accumulation"))
        }
    }

    /// `n`-fold convolution power, inductively; `f^0 = 1`.
    pub fn power(&self, n: u32) -> Series {
        let mut acc = Series::one(self.window);
        for _ in 0..n {
            acc = acc.convolve(self).expect("same window");
        }
        acc
    }

    /// Exact truncated inverse via the graded recursion
    /// `g_0 = 1/f_0`, `g_gamma = -(1/f_0) sum_{0 < beta <= gamma} f_beta g_{gamma-beta}`.
    pub fn invert(&self) -> Result<Series> {
        let f0 = self.expectation();
        if !(f0.norm() > INVERTIBILITY_THRESHOLD) {
            return Err(Error::NotInvertible);
        }
        let inv0 = Complex64::new(1.0, 0.0) / f0;
        let tail: Vec<(&MultiIndex, Complex64)> = self
            .terms
            .iter()
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, &c)| (a, c))
            .collect();
        let mut out: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        out.insert(MultiIndex::zero(), inv0);
        for gamma in self.window.enumerate() {
            if gamma.is_zero() {
                continue;
            }
            let dg = gamma.total_degree();
            let mut s = Complex64::ZERO;
            for &(beta, cb) in &tail {
                if beta.total_degree() > dg {
                    break;
                }
                if let Some(delta) = gamma.try_sub(beta) {
                    if let Some(&gd) = out.get(&delta) {
                        s += cb * gd;
                    }
                }
            }
            if s != Complex64::ZERO {
                out.insert(gamma, -inv0 * s);
            }
        }
        Ok(Self::from_map(out, self.window))
    }

    /// Neumann-series inverse `(1/f_0) sum_{n=0}^{terms} (1 - f/f_0)^n`.
    ///
    /// The summand `1 - f/f_0` has zero expectation, so its n-th power has
    /// minimal degree >= n; with `terms >= N` this agrees with [`invert`]
    /// exactly on the window.
    ///
    /// [`invert`]: Series::invert
    pub fn neumann_invert(&self, terms: u32) -> Result<Series> {
        let f0 = self.expectation();
        if !(f0.norm() > INVERTIBILITY_THRESHOLD) {
            return Err(Error::NotInvertible);
        }
        let inv0 = Complex64::new(1.0, 0.0) / f0;
        // h = 1 - f/f_0, built from the non-constant terms so E[h] is exactly zero
        let h_terms: BTreeMap<MultiIndex, Complex64> = self
            .terms
            .iter()
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, &c)| (a.clone(), -inv0 * c))
            .collect();
        let h = Self::from_map(h_terms, self.window);
        // h has zero expectation, so h^n vanishes on the window for
        // n > N and extra terms contribute exact zeros
        let effective = terms.min(self.window.max_degree);
        // Horner: S = 1 + h (1 + h (... ))
        let mut sum = Series::one(self.window);
        for _ in 0..effective {
            sum = Series::linear_combine(
                Complex64::new(1.0, 0.0),
                &Series::one(self.window),
                Complex64::new(1.0, 0.0),
                &sum.convolve(&h)?,
            )?;
        }
        Ok(sum.scale(inv0))
    }

    /// Formal partial derivative in generator `n`: `D_n(x^alpha) = alpha_n x^{alpha - e_n}`.
    pub fn derive(&self, generator: u32) -> Series {
        let e_n = MultiIndex::unit(generator);
        let mut out = BTreeMap::new();
        for (alpha, &c) in &self.terms {
            let k = alpha.exponent(generator);
            if k > 0 {
                let reduced = alpha.try_sub(&e_n).expect("exponent checked");
                out.insert(reduced, c * k as f64);
            }
        }
        Self::from_map(out, self.window)
    }
}

/// Composition `phi(f) = sum_n phi_n f^n`, exact on the window.
///
/// Splits `f = f_0 + u` with `E[u] = 0`: powers of `u` gain degree each step,
/// so only `u^j` for `j <= N` contribute, with scalar channel coefficients
/// `c_j = sum_{n >= j} phi_n C(n, j) f_0^{n-j}` (the recentered Taylor
/// coefficients). Each channel is an ordinary numeric series summed until the
/// increments stay below [`TAIL_INCREMENT_TOLERANCE`] or the term budget is
/// exhausted.
///
/// `guard` carries the constant `A(d)` when the caller wants the convergence
/// precondition `|E[f]| < radius / A(d)` enforced; `None` opts out, and an
/// infinite radius always passes.
pub fn compose(
    mut phi: impl FnMut(u64) -> Complex64,
    radius: f64,
    f: &Series,
    guard: Option<f64>,
) -> Result<Series> {
    let f0 = f.expectation();
    if let Some(constant) = guard {
        if radius.is_finite() {
            let bound = radius / constant;
            if !(f0.norm() < bound) {
                return Err(Error::ConvergenceDomain {
                    modulus: f0.norm(),
                    bound,
                });
            }
        }
    }
    let n_window = f.window().max_degree as usize;
    let mut channels = alloc::vec![Complex64::ZERO; n_window + 1];
    // binom[j] = C(n, j), pascal-updated in place; pow[j] = f_0^{n-j}
    let mut binom = alloc::vec![0.0f64; n_window + 1];
    let mut pow = alloc::vec![Complex64::ZERO; n_window + 1];
    let mut calm_streak = 0u32;
    let mut n = 0u64;
    loop {
        // advance Pascal's row from C(n-1, .) to C(n, .)
        let j_max = (n as usize).min(n_window);
        for j in (1..=j_max).rev() {
            binom[j] += binom[j - 1];
        }
        binom[0] = 1.0;
        if n as usize <= n_window {
            pow[n as usize] = Complex64::new(1.0, 0.0); // channel n activates: f_0^0
        }
        let coeff = phi(n);
        let mut max_increment = 0.0f64;
        for j in 0..=j_max {
            let increment = coeff * binom[j] * pow[j];
            channels[j] += increment;
            max_increment = max_increment.max(increment.norm());
            pow[j] *= f0;
        }
        if n as usize >= n_window {
            if max_increment < TAIL_INCREMENT_TOLERANCE {
                // several consecutive calm terms, so gaps in phi cannot stall
                // the sum one step short
                calm_streak += 1;
                if calm_streak >= 8 {
                    break;
                }
            } else {
                calm_streak = 0;
            }
        }
        n += 1;
        if n > TAIL_TERM_BUDGET {
            return Err(Error::TailNonConvergent);
        }
    }
    // u = f - f_0, zero expectation
    let u = Series::linear_combine(Complex64::new(1.0, 0.0), f, -f0, &Series::one(f.window()))?;
    // Horner over u: result = c_0 + u (c_1 + u (...))
    let mut acc = Series::constant(channels[n_window], f.window());
    for j in (0..n_window).rev() {
        acc = Series::linear_combine(
            Complex64::new(1.0, 0.0),
            &acc.convolve(&u)?,
            Complex64::new(1.0, 0.0),
            &Series::constant(channels[j], f.window()),
        )?;
    }
    Ok(acc)
}

fn powi(base: f64, exp: i32) -> f64 {
    let acc = crate::weights::powu(base, exp.unsigned_abs());
    if exp < 0 {
        1.0 / acc
    } else {
        acc
    }
}

impl PartialEq for Series {
    /// Windows must match and coefficients agree within
    /// [`COEFF_EQ_TOLERANCE`] per term.
    fn eq(&self, other: &Self) -> bool {
        if self.window != other.window {
            return false;
        }
        for (alpha, &c) in &self.terms {
            if (c - other.coefficient(alpha)).norm() > COEFF_EQ_TOLERANCE {
                return false;
            }
        }
        for (alpha, &c) in &other.terms {
            if (c - self.coefficient(alpha)).norm() > COEFF_EQ_TOLERANCE {
                return false;
            }
        }
        true
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series::linear_combine(
            Complex64::new(1.0, 0.0),
            self,
            Complex64::new(1.0, 0.0),
            rhs,
        )
        .expect("window mismatch in +")
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        Series::linear_combine(
            Complex64::new(1.0, 0.0),
            self,
            Complex64::new(-1.0, 0.0),
            rhs,
        )
        .expect("window mismatch in -")
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.convolve(rhs).expect("window mismatch in *")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (alpha, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let coeff = if c.im == 0.0 {
                alloc::format!("{}", c.re)
            } else if c.re == 0.0 {
                alloc::format!("{}i", c.im)
            } else {
                alloc::format!("({}+{}i)", c.re, c.im)
            };
            if alpha.is_zero() {
                write!(f, "{coeff}")?;
            } else if *c == Complex64::new(1.0, 0.0) {
                write!(f, "{alpha}")?;
            } else {
                write!(f, "{coeff}*{alpha}")?;
            }
        }
        Ok(())
    }
}
