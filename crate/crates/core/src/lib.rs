//! Sharp Fourier extension constants on spheres.
//!
//! Special functions, Gegenbauer polynomials and Gauss–Jacobi rules, exact
//! Funk–Hecke eigenvalues of the kernel behind the L² → L⁴ extension problem,
//! convolution powers of surface measure, zonal extension norms, and
//! verification routines for the sharp inequalities.

pub mod eigencalc;
pub mod error;
pub mod measures;
pub mod orthopoly;
pub mod radial_waves;
pub mod rng;
pub mod spherequad;
pub mod specialfn;

pub mod verifier;

pub use error::{Error, Result};
