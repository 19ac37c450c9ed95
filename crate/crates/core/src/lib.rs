//! Equilibrium free boundaries of generalized two-fluid Hele-Shaw flow.
//!
//! A blob of viscous fluid in a Hele-Shaw cell is driven by hydrodynamic
//! singularities (sources, sinks, dipoles, quadrupoles) and held in place by
//! an external potential field `G`. This crate builds the equilibrium
//! shapes as conformal maps of the unit disk and verifies them:
//!
//! * [`field`] evaluates the external potentials and complex currents,
//! * [`spectral`] holds the unit-circle quadrature, Cauchy splitting and
//!   root-finding primitives everything else is built on,
//! * [`geometry`] represents maps and boundaries and decides univalence,
//! * [`moments`] checks the equilibrium moment identities numerically,
//! * [`closed_form`] constructs the explicit equilibria for point-charge fields,
//! * [`riemann_hilbert`] solves the non-harmonic field cases by Cauchy
//!   integrals on the circle,
//! * [`gravity`] evolves Cauchy transforms under uniform gravity.
//!
//! Data-parallel loops go through [`Execution`]; with the default `parallel`
//! feature they run on rayon, without it everything is sequential.

pub mod closed_form;
pub mod error;
pub mod exec;
pub mod field;
pub mod geometry;
pub mod gravity;
pub mod moments;
pub mod riemann_hilbert;
pub mod spectral;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;
