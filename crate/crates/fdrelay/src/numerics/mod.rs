//! Self-contained numerical kernels shared by the rest of the crate:
//! dense complex vectors/matrices with a Hermitian eigensolver, the modified
//! Bessel function of the second kind, and adaptive quadrature on `(0, inf)`.
//!
//! Everything here is a pure function over value inputs and safe to call
//! concurrently from any number of threads.

mod bessel;
mod linalg;
mod quad;

pub use bessel::bessel_k;
pub use linalg::{hermitian_max_eig, Complex64, ComplexMatrix, ComplexVector, EigPair};
pub use quad::integrate_semi_infinite;

use thiserror::Error;

/// Errors reported by the numerical kernels.
#[derive(Debug, Clone, Error)]
pub enum NumericsError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (asymmetry {residual:.3e} > {tolerance:.3e})")]
    NotHermitian { residual: f64, tolerance: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    EigNoConvergence { sweeps: usize },
    #[error("quadrature did not converge (best estimate {best:.9e}, error bound {error_bound:.3e})")]
    QuadNoConvergence { best: f64, error_bound: f64 },
}
