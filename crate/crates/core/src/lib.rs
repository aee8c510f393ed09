//! Exact and numerical tools for singular monopoles on `S^1 x Sigma` and the
//! bundle pairs `(E, rho)` on the Riemann surface that classify them.
//!
//! The exact side works over `Q(i)` on the projective line; the numerical side
//! checks the Dirac local model, the Hopf-lift form identities and the abelian
//! flux constraints on a flat three-torus.

pub mod abelian;
pub mod dims;
pub mod diracmodel;
pub mod error;
pub mod exact;
pub mod iwahori;
pub mod pairmodel;
pub mod spectral;
pub mod testkit;

pub use error::{Error, Result};
