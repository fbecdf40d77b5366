//! Casimir energy of the piecewise-uniform relativistic string, its
//! finite-temperature and quantized-string thermodynamics, and the formally
//! related scalar-field plateau problem.
//!
//! The crate is organized by physical system:
//!
//! * [`specfun`] — special-function kernel (Hurwitz zeta at -1, Airy pair,
//!   Dedekind eta, Jacobi theta_3);
//! * [`twopiece`] — two-piece string: dispersion relation, eigenfrequency
//!   spectra, and the Casimir energy under cutoff, contour and zeta
//!   regularizations at zero and finite temperature;
//! * [`npiece`] — 2N-piece alternating string via the transfer-matrix
//!   eigenvalues, plus the scaling function E_N(x)/E_N(0);
//! * [`thermo`] — quantized two-piece string in the extreme-tension-ratio
//!   limit: free energy, internal energy, entropy, Hagedorn temperature;
//! * [`qft`] — scalar field in the piecewise-linear plateau potential:
//!   Green-function matching through Airy functions and the renormalized
//!   energy density on the plateau;
//! * [`quad`] — shared adaptive quadrature.
//!
//! All operations are pure functions of their arguments and are safe to call
//! concurrently. Natural units with k_B = c = 1 are used throughout; the
//! default total string length is pi.

// Guards of the form `!(x > 0.0)` are NaN-rejecting by construction;
// frozen reference constants keep every digit of the independent evaluation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod npiece;
pub mod qft;
pub mod quad;
pub mod specfun;
pub mod thermo;
pub mod twopiece;

pub use quad::{QuadError, QuadResult, QuadratureSettings};
pub use twopiece::{EnergyEstimate, Method};

/// Which exit class an error maps to at the CLI boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Invalid input or parameter combination.
    Domain,
    /// A numerical procedure failed to converge.
    Convergence,
}

/// Classification of library errors for process exit codes.
pub trait ClassifyError {
    fn class(&self) -> ErrorClass;
}

impl ClassifyError for quad::QuadError {
    fn class(&self) -> ErrorClass {
        match self {
            quad::QuadError::BadSettings => ErrorClass::Domain,
            _ => ErrorClass::Convergence,
        }
    }
}

impl ClassifyError for specfun::SpecFunError {
    fn class(&self) -> ErrorClass {
        match self {
            specfun::SpecFunError::Domain { .. } => ErrorClass::Domain,
            specfun::SpecFunError::Saturation { .. } => ErrorClass::Domain,
            specfun::SpecFunError::Convergence { .. } => ErrorClass::Convergence,
        }
    }
}
