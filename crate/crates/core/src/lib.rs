//! Phase-space representation of model atoms and pseudo-molecules.
//!
//! Electrons are modelled as a spin-1/2 factor tensored with three harmonic
//! oscillator modes (`hbar = m = omega = 1`). The Wigner function of such a
//! composite system is the expectation value of a product of displaced
//! parity kernels, one per factor: the SU(2) kernel `(1 + sqrt(3) sigma_z)/2`
//! rotated to a sphere angle for spins, and the displaced spatial parity for
//! oscillator modes. This crate evaluates that function and arbitrary reduced
//! slices of it (traces, position/momentum marginals, fixed phase points,
//! equal-angle spin slices), builds the standard atomic states (orbitals,
//! spin-orbit coupled `|j,m>` states, helium singlet/triplet, the lithium
//! Slater determinant, LCAO pi-bonds), and renders the result as a lattice of
//! sphere glyphs.
//!
//! Layout:
//! - [`kernels`]: per-factor kernel evaluation (oscillator wavefunctions,
//!   displaced Fock matrix elements, spin and mode kernels)
//! - [`states`]: signatures, product kets, state builders
//! - [`engine`]: reduced Wigner evaluation and scalar diagnostics
//! - [`scene`]: glyph lattices, deterministic rendering, scene JSON
//! - [`quad`]: Gauss quadrature rules used by tests and oracles
//! - [`oracles`] (feature `oracles`, on by default): independent brute-force
//!   references used to certify the fast paths

pub mod engine;
mod error;
pub mod kernels;
#[cfg(feature = "oracles")]
pub mod oracles;
pub mod quad;
pub mod scene;
pub mod states;

pub use error::Error;
pub use num_complex::Complex64;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
