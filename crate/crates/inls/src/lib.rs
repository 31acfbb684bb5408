//! Numerical laboratory for the inhomogeneous nonlinear Schrödinger
//! equation with an inverse-power potential,
//!
//! ```text
//! i u_t + Δu - c |x|^{-a} u = λ |x|^{-b} |u|^σ u,   u(0) = u0,   x ∈ R^d,
//! ```
//!
//! for radial data. The crate provides:
//!
//! * [`params`] — exponent calculus: critical indices, scaling regimes,
//!   local-wellposedness hypothesis checks, Strichartz pair selection;
//! * [`field`] — staggered radial grids, fields, and the conserved
//!   functionals (mass, energy, the virial-comparison functional G);
//! * [`operator`] — a fourth-order divergence-form radial Laplacian,
//!   self-adjoint in the quadrature inner product;
//! * [`virial`] — localized virial weights and the second-derivative
//!   identity, term by term;
//! * [`variational`] — ground states by shooting, Pohozaev certificates,
//!   sharp Gagliardo–Nirenberg and Hardy–Sobolev constants;
//! * [`evolution`] — mass-conserving Strang/Crank–Nicolson time stepping
//!   with blow-up and resolution guards;
//! * [`dichotomy`] — global-existence versus blow-up classification with
//!   numerical cross-checks;
//! * [`ledger`], [`config`] — persistence and run configuration.

pub mod config;
pub mod dichotomy;
pub mod evolution;
pub mod field;
pub mod ledger;
pub mod operator;
pub mod params;
pub mod variational;
pub mod virial;
