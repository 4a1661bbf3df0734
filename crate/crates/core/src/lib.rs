//! Lattice discretization of Fourier multiplier operators.
//!
//! The crate builds discrete operators `H_h = G₀,h(D) + V_h` on truncated
//! periodic lattices `hZ^d`, connects them to their continuum counterparts
//! through a biorthogonal embedding `J_h` and discretization `K_h`, and
//! measures how fast `J_h(H_h − z)⁻¹K_h` approaches `(H − z)⁻¹`.

pub mod error;
pub mod harness;
pub mod lattice;
pub mod resolvent;
pub mod riesz;
pub mod spectra;
pub mod symbols;

pub use error::{Error, Result};
