//! Heat-trace asymptotics of form Laplacians on Einstein model manifolds
//! with boundary, and spectral detection of totally geodesic, minimal and
//! umbilic boundaries.
//!
//! The crate has two independent routes to the same numbers: closed-form
//! heat coefficients computed in exact arithmetic ([`heat_coefficients`],
//! built on [`exact_algebra`]) and coefficients fitted to exact spectra
//! ([`spectra`], [`asymptotic_fit`]). [`discriminator`] inverts either set of
//! coefficients back to boundary invariants and classifies the boundary.

pub mod asymptotic_fit;
pub mod boundary_geometry;
pub mod cli;
pub mod conditions;
pub mod discriminator;
pub mod error;
pub mod exact_algebra;
pub mod format;
pub mod heat_coefficients;
pub mod scalar;
pub mod spectra;

pub use conditions::{BoundaryCondition, OperatorPair, OperatorSpec};
pub use error::{Error, Result};
pub use exact_algebra::{ExactValue, Rational};
