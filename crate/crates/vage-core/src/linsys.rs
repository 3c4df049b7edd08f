//! Matrices over the ring, realization algebra `D + zC(I - zA)^{-1}B`,
//! rational-function evaluation, and observability tests.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::analysis;
use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::monoid::TruncationSpec;
use crate::series::Series;

/// Relative singular-value threshold below which an expectation matrix is
/// treated as singular.
pub const EXPECTATION_SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Relative singular-value threshold for the Kalman rank test.
pub const RANK_REL_THRESHOLD: f64 = 1e-10;

/// Dense matrix with series entries sharing one window.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Series>,
}

impl RingMatrix {
    /// Row-major construction; all entries must share one window.
    pub fn new(rows: usize, cols: usize, entries: Vec<Series>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "ring matrix construction",
            });
        }
        let window = entries[0].window();
        for e in &entries {
            if e.window() != window {
                return Err(Error::WindowMismatch {
                    left: window,
                    right: e.window(),
                });
            }
        }
        Ok(RingMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Series,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn zero(rows: usize, cols: usize, window: TruncationSpec) -> Self {
        RingMatrix {
            rows,
            cols,
            entries: alloc::vec![Series::zero(window); rows * cols],
        }
    }

    pub fn identity(n: usize, window: TruncationSpec) -> Self {
        let mut m = Self::zero(n, n, window);
        for i in 0..n {
            m.entries[i * n + i] = Series::one(window);
        }
        m
    }

    /// Constant matrix lifted from the scalars.
    pub fn from_complex(m: &ComplexMatrix, window: TruncationSpec) -> Self {
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                entries.push(Series::constant(m.get(i, j), window));
            }
        }
        RingMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn window(&self) -> TruncationSpec {
        self.entries[0].window()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Series] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Series::is_zero)
    }

    /// Entrywise expectation, a complex matrix.
    pub fn expectation(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).expectation())
    }

    pub fn add(&self, rhs: &RingMatrix) -> Result<RingMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                context: "ring matrix sum",
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| {
                Series::linear_combine(Complex64::new(1.0, 0.0), a, Complex64::new(1.0, 0.0), b)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    pub fn sub(&self, rhs: &RingMatrix) -> Result<RingMatrix> {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Termwise scalar multiple.
    pub fn scale(&self, c: Complex64) -> RingMatrix {
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Scalar-by-matrix convolution `f * M`.
    pub fn series_scale(&self, f: &Series) -> Result<RingMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| f.convolve(e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    /// Matrix product with convolution as the scalar multiplication.
    pub fn mul(&self, rhs: &RingMatrix) -> Result<RingMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                context: "ring matrix product",
            });
        }
        let window = self.window();
        if window != rhs.window() {
            return Err(Error::WindowMismatch {
                left: window,
                right: rhs.window(),
            });
        }
        let mut out = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Series::zero(window);
                for k in 0..self.cols {
                    let term = self.entry(i, k).convolve(rhs.entry(k, j))?;
                    acc = Series::linear_combine(
                        Complex64::new(1.0, 0.0),
                        &acc,
                        Complex64::new(1.0, 0.0),
                        &term,
                    )?;
                }
                out.push(acc);
            }
        }
        Self::new(self.rows, rhs.cols, out)
    }

    /// Largest coefficient magnitude over all entries.
    pub fn max_coefficient(&self) -> f64 {
        self.entries
            .iter()
            .map(Series::max_coefficient)
            .fold(0.0, f64::max)
    }

    /// Exact truncated inverse.
    ///
    /// Writes `M = E (I - K)` with `E = E[M]` and `E[K] = 0`; entries of `K`
    /// have zero expectation so `K^n` has minimal total degree `>= n` and
    /// `M^{-1} = (sum_{n=0}^{N} K^n) E^{-1}` is exact on the window. Requires
    /// `E[M]` numerically invertible (relative singular-value threshold
    /// [`EXPECTATION_SINGULARITY_THRESHOLD`]).
    pub fn invert(&self) -> Result<RingMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                context: "ring matrix inverse",
            });
        }
        let window = self.window();
        let expectation = self.expectation();
        let sigma = expectation.singular_values();
        let largest = sigma.first().copied().unwrap_or(0.0);
        let smallest = sigma.last().copied().unwrap_or(0.0);
        if smallest < EXPECTATION_SINGULARITY_THRESHOLD * largest || largest == 0.0 {
            return Err(Error::SingularExpectation {
                condition: if smallest > 0.0 {
                    largest / smallest
                } else {
                    f64::INFINITY
                },
            });
        }
        let e_inv = RingMatrix::from_complex(&expectation.inverse()?, window);
        let k = RingMatrix::identity(self.rows, window).sub(&e_inv.mul(self)?)?;
        // Horner: sum = I + K (I + K (...))
        let mut sum = RingMatrix::identity(self.rows, window);
        for _ in 0..window.max_degree {
            sum = RingMatrix::identity(self.rows, window).add(&k.mul(&sum)?)?;
        }
        sum.mul(&e_inv)
    }

    /// `[self, other]` side by side.
    pub fn hstack(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context: "ring matrix horizontal stack",
            });
        }
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.entry(i, j).clone()
            } else {
                other.entry(i, j - self.cols).clone()
            }
        })
    }

    /// `[self; other]` stacked vertically.
    pub fn vstack(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "ring matrix vertical stack",
            });
        }
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.entry(i, j).clone()
            } else {
                other.entry(i - self.rows, j).clone()
            }
        })
    }

    /// Block diagonal `[self, 0; 0, other]`.
    pub fn block_diag(&self, other: &RingMatrix) -> Result<RingMatrix> {
        let window = self.window();
        if window != other.window() {
            return Err(Error::WindowMismatch {
                left: window,
                right: other.window(),
            });
        }
        Self::from_fn(
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| match (i < self.rows, j < self.cols) {
                (true, true) => self.entry(i, j).clone(),
                (false, false) => other.entry(i - self.rows, j - self.cols).clone(),
                _ => Series::zero(window),
            },
        )
    }
}

/// State-space realization of `R(z) = D + z C (I - zA)^{-1} B` with ring
/// coefficients: `A` is N x N, `B` is N x m, `C` is p x N, `D` is p x m.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub a: RingMatrix,
    pub b: RingMatrix,
    pub c: RingMatrix,
    pub d: RingMatrix,
}

impl Realization {
    pub fn new(a: RingMatrix, b: RingMatrix, c: RingMatrix, d: RingMatrix) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n
            || b.rows() != n
            || c.cols() != n
            || d.rows() != c.rows()
            || d.cols() != b.cols()
        {
            return Err(Error::DimensionMismatch {
                context: "realization construction",
            });
        }
        let window = a.window();
        for m in [&b, &c, &d] {
            if m.window() != window {
                return Err(Error::WindowMismatch {
                    left: window,
                    right: m.window(),
                });
            }
        }
        Ok(Realization { a, b, c, d })
    }

    /// Scalar realization of the constant function `R(z) = d`.
    pub fn constant(d: Series) -> Self {
        let window = d.window();
        Realization {
            a: RingMatrix::zero(1, 1, window),
            b: RingMatrix::zero(1, 1, window),
            c: RingMatrix::zero(1, 1, window),
            d: RingMatrix::new(1, 1, alloc::vec![d]).expect("1x1"),
        }
    }

    /// Scalar realization of `R(z) = z`: A = 0, B = 1, C = 1, D = 0.
    pub fn shift(window: TruncationSpec) -> Self {
        Realization {
            a: RingMatrix::zero(1, 1, window),
            b: RingMatrix::identity(1, window),
            c: RingMatrix::identity(1, window),
            d: RingMatrix::zero(1, 1, window),
        }
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn outputs(&self) -> usize {
        self.c.rows()
    }

    pub fn inputs(&self) -> usize {
        self.b.cols()
    }

    pub fn window(&self) -> TruncationSpec {
        self.a.window()
    }

    /// Realization of `R1 + R2`: block-diagonal state matrix, stacked inputs,
    /// concatenated outputs, feedthrough sum.
    pub fn sum(&self, other: &Realization) -> Result<Realization> {
        if self.outputs() != other.outputs() || self.inputs() != other.inputs() {
            return Err(Error::DimensionMismatch {
                context: "realization sum",
            });
        }
        Realization::new(
            self.a.block_diag(&other.a)?,
            self.b.vstack(&other.b)?,
            self.c.hstack(&other.c)?,
            self.d.add(&other.d)?,
        )
    }

    /// Realization of `R1(z) R2(z)`:
    /// `A = [A1, B1 C2; 0, A2]`, `B = [B1 D2; B2]`, `C = [C1, D1 C2]`,
    /// `D = D1 D2`.
    pub fn product(&self, other: &Realization) -> Result<Realization> {
        if self.inputs() != other.outputs() {
            return Err(Error::DimensionMismatch {
                context: "realization product",
            });
        }
        let window = self.window();
        let top = self.a.hstack(&self.b.mul(&other.c)?)?;
        let bottom =
            RingMatrix::zero(other.state_dim(), self.state_dim(), window).hstack(&other.a)?;
        let a = top.vstack(&bottom)?;
        let b = self.b.mul(&other.d)?.vstack(&other.b)?;
        let c = self.c.hstack(&self.d.mul(&other.c)?)?;
        let d = self.d.mul(&other.d)?;
        Realization::new(a, b, c, d)
    }

    /// Realization of `[R1; R2]` (outputs stacked; inputs must agree).
    pub fn concat_col(&self, other: &Realization) -> Result<Realization> {
        if self.inputs() != other.inputs() {
            return Err(Error::DimensionMismatch {
                context: "realization column concatenation",
            });
        }
        Realization::new(
            self.a.block_diag(&other.a)?,
            self.b.vstack(&other.b)?,
            self.c.block_diag(&other.c)?,
            self.d.vstack(&other.d)?,
        )
    }

    /// Realization of `[R1, R2]` (inputs concatenated; outputs must agree).
    pub fn concat_row(&self, other: &Realization) -> Result<Realization> {
        if self.outputs() != other.outputs() {
            return Err(Error::DimensionMismatch {
                context: "realization row concatenation",
            });
        }
        Realization::new(
            self.a.block_diag(&other.a)?,
            self.b.block_diag(&other.b)?,
            self.c.hstack(&other.c)?,
            self.d.hstack(&other.d)?,
        )
    }

    /// Realization of the pointwise inverse:
    /// `R^{-1}(z) = D^{-1} - z D^{-1} C (I - z(A - B D^{-1} C))^{-1} B D^{-1}`
    /// (state matrix `A - B D^{-1} C`). Requires square `D` with invertible
    /// expectation.
    pub fn inverse(&self) -> Result<Realization> {
        if self.outputs() != self.inputs() {
            return Err(Error::DimensionMismatch {
                context: "realization inverse",
            });
        }
        let d_inv = self.d.invert()?;
        let a = self.a.sub(&self.b.mul(&d_inv)?.mul(&self.c)?)?;
        let b = self.b.mul(&d_inv)?;
        let c = d_inv.mul(&self.c)?.scale(Complex64::new(-1.0, 0.0));
        Realization::new(a, b, c, d_inv)
    }

    /// Evaluates `R` at a ring element: `D + f C (I - f A)^{-1} B`.
    /// Defined when `I - E[f] E[A]` is invertible.
    pub fn eval(&self, f: &Series) -> Result<RingMatrix> {
        let window = self.window();
        if f.window() != window {
            return Err(Error::WindowMismatch {
                left: window,
                right: f.window(),
            });
        }
        let n = self.state_dim();
        let fa = self.a.series_scale(f)?;
        let resolvent = match RingMatrix::identity(n, window).sub(&fa)?.invert() {
            Ok(inv) => inv,
            Err(Error::SingularExpectation { .. }) => return Err(Error::EvaluationDomain),
            Err(e) => return Err(e),
        };
        let tail = self.c.mul(&resolvent)?.mul(&self.b)?.series_scale(f)?;
        self.d.add(&tail)
    }
}

/// Evaluates the rational function `p(z) q(z)^{-1}` at `f`, by Horner over
/// the ring. `p` has ring-matrix coefficients (constant term first) and `q`
/// scalar-series coefficients. Requires `sum_m E[q_m] E[f]^m != 0`.
pub fn eval_rational(p: &[RingMatrix], q: &[Series], f: &Series) -> Result<RingMatrix> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "rational function with empty coefficient list",
        });
    }
    // denominator expectation: sum E[q_m] E[f]^m
    let ef = f.expectation();
    let mut denom = Complex64::ZERO;
    let mut ef_pow = Complex64::new(1.0, 0.0);
    for qm in q {
        denom += qm.expectation() * ef_pow;
        ef_pow *= ef;
    }
    if !(denom.norm() > 1e-300) {
        return Err(Error::DenominatorExpectationZero);
    }
    // q(f) by Horner
    let mut qf = q.last().expect("nonempty").clone();
    for qm in q.iter().rev().skip(1) {
        qf = Series::linear_combine(
            Complex64::new(1.0, 0.0),
            &qf.convolve(f)?,
            Complex64::new(1.0, 0.0),
            qm,
        )?;
    }
    // p(f) by Horner with matrix coefficients
    let mut pf = p.last().expect("nonempty").clone();
    for pk in p.iter().rev().skip(1) {
        pf = pf.series_scale(f)?.add(pk)?;
    }
    pf.series_scale(&qf.invert()?)
}

/// Kalman sufficiency test on the expectation pair: the stacked matrix
/// `[Ce; Ce Ae; ...; Ce Ae^{N-1}]` has rank `N` (singular-value rank at
/// [`RANK_REL_THRESHOLD`]).
pub fn kalman_observable(ce: &ComplexMatrix, ae: &ComplexMatrix) -> Result<bool> {
    if ae.rows() != ae.cols() || ce.cols() != ae.rows() {
        return Err(Error::DimensionMismatch {
            context: "kalman observability test",
        });
    }
    let n = ae.rows();
    let mut block = ce.clone();
    let mut stacked = ce.clone();
    for _ in 1..n {
        block = block.mul(ae)?;
        stacked = stacked.vstack(&block)?;
    }
    Ok(stacked.rank(RANK_REL_THRESHOLD) == n)
}

/// Outcome status of an observability probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessStatus {
    /// A nonzero output coefficient was located.
    Certified,
    /// The probed vector was zero; nothing to certify.
    ZeroInput,
    /// The expectation pair fails the Kalman test; sufficiency gives no
    /// guarantee and the probe is skipped.
    Inconclusive,
    /// No coefficient above threshold within the horizon (not expected when
    /// the expectation pair is observable).
    Exhausted,
}

/// First nonzero output coefficient found by a probe.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessLocation {
    /// Power `k` in `C A^k f`.
    pub power: usize,
    pub output_row: usize,
    pub index: crate::monoid::MultiIndex,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorWitness {
    pub status: WitnessStatus,
    pub location: Option<WitnessLocation>,
}

/// Magnitude below which probe coefficients do not certify anything.
pub const WITNESS_COEFF_THRESHOLD: f64 = 1e-12;

/// Probes one state vector `f` (an N x 1 ring matrix): scans `C A^k f` for
/// `k < N * (window index count)` and reports the first coefficient with
/// magnitude above [`WITNESS_COEFF_THRESHOLD`].
pub fn observe_vector(r: &Realization, f: &RingMatrix) -> Result<VectorWitness> {
    if f.rows() != r.state_dim() || f.cols() != 1 {
        return Err(Error::DimensionMismatch {
            context: "observability probe vector",
        });
    }
    if f.is_zero() {
        return Ok(VectorWitness {
            status: WitnessStatus::ZeroInput,
            location: None,
        });
    }
    if !kalman_observable(&r.c.expectation(), &r.a.expectation())? {
        return Ok(VectorWitness {
            status: WitnessStatus::Inconclusive,
            location: None,
        });
    }
    let horizon = r.state_dim() * r.window().index_count() as usize;
    let mut state = f.clone();
    for power in 0..horizon.max(1) {
        let out = r.c.mul(&state)?;
        for row in 0..out.rows() {
            for (alpha, coeff) in out.entry(row, 0).terms() {
                if coeff.norm() > WITNESS_COEFF_THRESHOLD {
                    return Ok(VectorWitness {
                        status: WitnessStatus::Certified,
                        location: Some(WitnessLocation {
                            power,
                            output_row: row,
                            index: alpha.clone(),
                            magnitude: coeff.norm(),
                        }),
                    });
                }
            }
        }
        state = r.a.mul(&state)?;
    }
    Ok(VectorWitness {
        status: WitnessStatus::Exhausted,
        location: None,
    })
}

/// Aggregate of seeded random probes.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    pub trials: u32,
    pub seed: u64,
    pub certified: u32,
    pub status: WitnessStatus,
    /// Location found by the first certified trial.
    pub first_location: Option<WitnessLocation>,
}

/// Runs `trials` random nonzero state vectors through [`observe_vector`].
/// Requires the expectation pair to pass the Kalman test, otherwise the
/// report is marked inconclusive without probing.
pub fn observability_witness(r: &Realization, trials: u32, seed: u64) -> Result<WitnessReport> {
    if !kalman_observable(&r.c.expectation(), &r.a.expectation())? {
        return Ok(WitnessReport {
            trials: 0,
            seed,
            certified: 0,
            status: WitnessStatus::Inconclusive,
            first_location: None,
        });
    }
    let mut rng = analysis::seeded_rng(seed);
    let window = r.window();
    let mut certified = 0;
    let mut first_location = None;
    for _ in 0..trials {
        let f = RingMatrix::from_fn(r.state_dim(), 1, |_, _| {
            analysis::random_series(window, &mut rng)
        })?;
        let witness = observe_vector(r, &f)?;
        match witness.status {
            WitnessStatus::Certified => {
                certified += 1;
                if first_location.is_none() {
                    first_location = witness.location;
                }
            }
            _ => {
                return Ok(WitnessReport {
                    trials,
                    seed,
                    certified,
                    status: witness.status,
                    first_location,
                })
            }
        }
    }
    Ok(WitnessReport {
        trials,
        seed,
        certified,
        status: WitnessStatus::Certified,
        first_location,
    })
}
