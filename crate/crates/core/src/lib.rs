//! Central discontinuous Galerkin methods for the special relativistic
//! hydrodynamics (RHD) equations with a general equation of state.
//!
//! The solver evolves two piecewise-polynomial solutions on mutually dual
//! (overlapping) meshes, so no Riemann solver is needed: fluxes are always
//! evaluated where the dual solution is continuous. A per-cell scaling
//! limiter keeps the numerical solution inside the admissible state set
//! (positive density, pressure, internal energy; subluminal velocity) at
//! every quadrature point the scheme touches, which is what lets the
//! high-order scheme survive flows with large Lorentz factors, strong
//! shocks, and near-vacuum pressures.
//!
//! Crate layout:
//! - [`eos`]: equation-of-state models (ideal and three approximate
//!   one-component gas closures), analytic derivatives, validity checks.
//! - [`state`]: conserved/primitive state vectors, the admissibility
//!   predicate, flux evaluation, and conservative-to-primitive recovery.
//! - [`basis`] / [`grid`]: scaled Legendre modal bases, Gauss and
//!   Gauss-Lobatto rules, overlapping 1D/2D meshes.
//! - [`limiters`]: the two-step admissibility limiter and a component-wise
//!   TVB minmod moment limiter for shocks.
//! - [`solver`]: semi-discrete residuals on both meshes, SSP time
//!   integrators, boundary conditions, run drivers, and error norms.
//! - [`problems`]: the benchmark problem library and a first-order
//!   Lax-Friedrichs reference solver.
//! - [`properties`]: randomized checks of the admissible-set algebra,
//!   shared by the CLI `validate` command and the test suite.

pub mod basis;
pub mod eos;
pub mod error;
pub mod grid;
pub mod harness;
pub mod limiters;
pub mod problems;
pub mod properties;
pub mod solver;
pub mod state;

pub use basis::{Basis, QuadratureSet};
pub use eos::EosModel;
pub use error::{Error, Result};
pub use grid::{Mesh1d, Mesh2d};
pub use state::{AdmissibilityEps, Conserved, Primitive};
