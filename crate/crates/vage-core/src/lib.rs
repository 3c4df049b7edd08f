//! Exact truncated computation in convolution rings of functions on free
//! commutative monoids with admissible weights (Våge spaces).
//!
//! The ring elements are sparse complex series over multi-indices, truncated
//! to a window on which every operation (convolution, inversion, composition,
//! realization algebra) is exact. Weight families grade the ring with the
//! norms `‖f‖_p = (Σ |f_α|² a_α^{-p})^{1/2}` and decide whether the Våge
//! convolution inequality `‖fg‖_p ≤ A(p-q) ‖f‖_q ‖g‖_p` holds; the crate
//! verifies those inequalities numerically, exhibits their failure for the
//! Schwartz weight, and carries the supporting Hermite-function and
//! linear-system machinery.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live
//! in the companion `vage-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod cmatrix;
pub mod error;
pub mod hermite;
pub mod linsys;
pub mod monoid;
pub mod series;
pub mod weights;

pub use error::{Error, Result};
pub use monoid::{MultiIndex, TruncationSpec};
pub use num_complex::Complex64;
pub use series::Series;
pub use weights::WeightSpec;
