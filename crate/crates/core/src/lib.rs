//! Exact solution classes of the static Euler and incompressible
//! Navier-Stokes equations built from the (1,2)-symplectic representation
//!
//! ```text
//! u = (A×∇)φ + ((A×∇)×∇)ψ
//! ```
//!
//! together with the machinery needed to check them numerically: a small
//! field algebra with analytic partial derivatives, Bessel functions and
//! root finding, eigen-solvers for the ball, disc and annulus, Gaussian
//! heat-kernel quadrature, and an independent finite-difference referee.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops read more naturally for small fixed-size matrices.
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod eigen;
mod error;
pub mod fields;
pub mod quadrature;
pub mod solutions;
pub mod specfun;
pub mod turbulence;
mod vector;
pub mod verify;

pub use error::{Error, Result};
pub use vector::{Axis, Point3, Vec3};
