//! Riesz summability of general Dirichlet series and Fourier analysis on
//! truncated Dirichlet groups.
//!
//! The crate is organized along the objects of the theory:
//!
//! - [`frequency`]: finite frequency prefixes and their transforms
//! - [`group`]: torus realizations of truncated Dirichlet groups, Haar
//!   sampling, the Kronecker flow, and the Bohr transform
//! - [`series`]: Dirichlet polynomials with partial sums and first/second
//!   Riesz means
//! - [`summability`]: convergence detection, the consistency theorems,
//!   order reduction and abscissa estimation
//! - [`analysis`]: Poisson translation, norms, time averages and the
//!   maximal-operator sampling suite
//! - [`verify`]: numeric checks of the kernel identities and bounds behind
//!   the maximal inequalities, and the second-means growth probe
//! - [`experiments`]: seeded end-to-end Monte-Carlo experiment drivers with
//!   CSV reports

// validations use the negated form `!(x > 0.0)` on purpose: unlike
// `x <= 0.0`, it also rejects NaN inputs
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod frequency;
pub mod grid;
pub mod group;
pub mod quad;
pub mod rng;
pub mod series;
pub mod special;
pub mod sum;
pub mod summability;
pub mod verify;

pub use error::{Error, Result};
pub use frequency::{Frequency, SpacingKind, SpacingParams, SpacingReport};
pub use group::{AnalyticPolynomial, GroupPoint, GroupRealization, RealizationHint};
pub use series::{DirichletPolynomial, RieszKind, RieszParams};
pub use summability::ConvergenceReport;


pub use num_complex::Complex64;
