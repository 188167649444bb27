//! Spectral analysis of finite-difference schemes for the linear advection
//! equation, including nonlinear WENO schemes.
//!
//! The crate computes modified wavenumbers of spatial operators (analytically
//! for linear stencils, by evolving probe modes for nonlinear ones), turns them
//! into numerical group velocities for forward Euler, third-order and
//! fourth-order Runge-Kutta time stepping, and checks the predictions against
//! direct simulations of 1D wave problems.
//!
//! Module map:
//! - [`dft`]: forward/inverse transform and Hilbert envelopes.
//! - [`schemes`]: UPW5, WENO5-JS and WENO5-M derivative operators.
//! - [`timeint`]: explicit time integrators.
//! - [`adr`]: modified-wavenumber tables from probe-mode evolution.
//! - [`qldrp`]: group-velocity formulas and GVP maps.
//! - [`waves`]: advection and coupled-system solvers plus velocity measurements.
//! - [`reproduce`]: reference benchmark drivers.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adr;
pub mod dft;
mod error;
pub mod grid;
pub mod io;
pub mod qldrp;
pub mod reproduce;
pub mod schemes;
pub mod svg;
pub mod timeint;
pub mod waves;

pub use error::{Error, Result};
pub use num_complex::Complex64;
