//! Error vocabulary shared by all modules.

use alloc::string::String;
use core::fmt;

use crate::monoid::{MultiIndex, TruncationSpec};

/// Everything that can go wrong in the library.
///
/// Every message names the violated precondition so that callers (the CLI in
/// particular) can surface it verbatim.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two ring values over different truncation windows were combined.
    WindowMismatch {
        left: TruncationSpec,
        right: TruncationSpec,
    },
    /// A multi-index lies outside the truncation window.
    OutOfWindow {
        index: MultiIndex,
        window: TruncationSpec,
    },
    /// Inversion requested for an element whose expectation vanishes.
    NotInvertible,
    /// A generator index outside the weight family's generator set.
    GeneratorOutOfDomain {
        family: &'static str,
        generator: u32,
    },
    /// A floating-point evaluation left the representable range.
    Overflow(&'static str),
    /// Admissibility violated: the generator weight is not greater than one.
    NotAdmissible { generator: u32, weight: f64 },
    /// The weight sum defining the requested constant diverges for this order.
    Divergent { d: u32, required: u32 },
    /// Closed-form constants exist for exponential families only.
    ClosedFormUnsupported,
    /// Exponent factorial exceeded the floating range.
    FactorialOverflow,
    /// Matrix dimensions incompatible with the requested operation.
    DimensionMismatch { context: &'static str },
    /// The expectation matrix is numerically singular.
    SingularExpectation { condition: f64 },
    /// A plain complex matrix could not be inverted.
    SingularMatrix,
    /// Realization evaluated outside its domain: `I - E[f]E[A]` is singular.
    EvaluationDomain,
    /// The denominator expectation of a rational function vanished at `f`.
    DenominatorExpectationZero,
    /// Power-series composition outside the guaranteed convergence disk.
    ConvergenceDomain { modulus: f64, bound: f64 },
    /// The scalar tail of a composition failed to settle within the budget.
    TailNonConvergent,
    /// Hermite degree above the stability guard.
    DegreeGuard { n: u32, max: u32 },
    /// Mehler kernel parameter outside the open unit disk.
    MehlerDomain { modulus: f64 },
    /// Successive quadrature refinements disagree beyond tolerance.
    QuadratureNonConvergent { last_delta: f64, tolerance: f64 },
    /// A stated precondition was violated; the message names it.
    Precondition(String),
}

impl Error {
    /// True for errors reporting a numeric procedure that failed to converge,
    /// as opposed to a domain or precondition violation.
    pub fn is_nonconvergence(&self) -> bool {
        matches!(
            self,
            Error::TailNonConvergent | Error::QuadratureNonConvergent { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::WindowMismatch { left, right } => {
                write!(f, "truncation windows must match: {left:?} vs {right:?}")
            }
            Error::OutOfWindow { index, window } => write!(
                f,
                "multi-index {index} lies outside the truncation window {window:?}"
            ),
            Error::NotInvertible => {
                write!(f, "not invertible: the expectation E[f] vanishes")
            }
            Error::GeneratorOutOfDomain { family, generator } => write!(
                f,
                "generator {generator} is outside the domain of the {family} weight family"
            ),
            Error::Overflow(what) => write!(f, "floating-point overflow in {what}"),
            Error::NotAdmissible { generator, weight } => write!(
                f,
                "weight not admissible: a_e{generator} = {weight} is not > 1"
            ),
            Error::Divergent { d, required } => write!(
                f,
                "sum of a^-d diverges for d = {d}; this family requires d >= {required}"
            ),
            Error::ClosedFormUnsupported => write!(
                f,
                "closed-form constant requires an exponential weight family"
            ),
            Error::FactorialOverflow => {
                write!(f, "multi-index factorial exceeds the floating range")
            }
            Error::DimensionMismatch { context } => {
                write!(f, "matrix dimension mismatch in {context}")
            }
            Error::SingularExpectation { condition } => write!(
                f,
                "expectation matrix numerically singular (condition estimate {condition:e})"
            ),
            Error::SingularMatrix => write!(f, "complex matrix is singular"),
            Error::EvaluationDomain => write!(
                f,
                "evaluation outside the realization domain: I - E[f]E[A] is singular"
            ),
            Error::DenominatorExpectationZero => write!(
                f,
                "denominator expectation sum E[q_m] E[f]^m vanishes at the evaluation point"
            ),
            Error::ConvergenceDomain { modulus, bound } => write!(
                f,
                "composition outside the convergence disk: |E[f]| = {modulus} is not < {bound}"
            ),
            Error::TailNonConvergent => write!(
                f,
                "scalar tail of the composition did not settle within the term budget"
            ),
            Error::DegreeGuard { n, max } => {
                write!(f, "Hermite degree {n} exceeds the stability guard {max}")
            }
            Error::MehlerDomain { modulus } => {
                write!(f, "Mehler parameter |s| = {modulus} is not < 1")
            }
            Error::QuadratureNonConvergent {
                last_delta,
                tolerance,
            } => write!(
                f,
                "quadrature refinements still differ by {last_delta:e} (tolerance {tolerance:e})"
            ),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
