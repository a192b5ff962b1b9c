//! Numerical harmonic analysis on rank-one symmetric spaces.
//!
//! The crate is organised in layers, each building on the previous one:
//!
//! * [`lie`]: matrix groups (SL2, SL3, SLn, SO(1,n)), Iwasawa and Cartan
//!   decompositions, Weyl elements, and the rank-one symmetry probe
//!   H(nw) vs H(n^{-1}w) together with its SL3 counterexample.
//! * [`geometry`]: the hyperbolic disk and its boundary circle, horocycle
//!   brackets, boundary actions, geodesic frames and flow, quadrature grids,
//!   and a finite-difference hyperbolic Laplacian.
//! * [`spectral`]: Harish-Chandra c-function (product and integral routes),
//!   Plancherel density for all rank-one multiplicity patterns, and the
//!   related e-function and Laplace eigenvalue maps.
//! * [`transforms`]: Helgason Fourier transform, its inverse, a Plancherel
//!   pairing check, and the Poisson transform of boundary measures.
//! * [`psdistrib`]: Radon and weighted Radon transforms, Knapp-Stein
//!   operators, Patterson-Sullivan-type phase-space distributions, the
//!   Wigner distribution, the intertwining residual check, and the
//!   Kohn-Nirenberg quantisation layer.
//!
//! All randomised entry points take a caller-provided seeded RNG and all
//! quadratures use fixed reduction orders, so every public function is
//! deterministic bit-for-bit for fixed inputs.

pub mod error;
mod gamma;
pub mod geometry;
pub mod lie;
mod numerics;
pub mod psdistrib;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result};
