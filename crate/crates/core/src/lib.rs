//! Pseudospectral laboratory for the two-dimensional Dirac–Klein–Gordon system.
//!
//! * [`spectral_grid`]: periodic lattices, unitary DFTs, the `DKGF` container.
//! * [`dirac_algebra`]: Dirac matrices, eigenprojections `Π±(ξ)`, the null-form
//!   symbol and angle functions.
//! * [`norms`]: Fourier–Lebesgue `Ĥ^{s,r}` and Bourgain-type `X^r_{s,b}` norms.
//! * [`solver`]: the half-wave split system, exponential stepping, Picard
//!   iteration and residual checks against the original equations.
//! * [`harness`]: Monte-Carlo and quadrature checks of the angle, null-form,
//!   bilinear and product estimates, scaling laws and admissible regions.

pub mod dirac_algebra;
pub mod error;
pub mod harness;
pub mod norms;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod solver;
pub mod spectral_grid;

pub use error::{Error, Result};
pub use report::EstimateReport;
pub use spectral_grid::{Field, GridSpec, Representation, ScalarField, SpinorField};
