//! Per-factor displaced-parity kernel elements.
//!
//! Everything here is a pure function of its arguments: spin-1/2 kernels,
//! oscillator eigenfunctions, displaced-Fock matrix elements and the per-mode
//! kernel under each reduction directive. Units are `hbar = m = omega = 1`
//! and the coherent label is `alpha = (q + i p) / sqrt(2)`.

mod displaced;
mod hermite;
mod mode;
mod spin;

pub use displaced::displaced_fock_element;
pub use hermite::{hermite_wavefunction, Representation, MAX_FOCK};
pub use mode::{displaced_wavefunction, mode_kernel, ModeDirective};
pub use spin::{spin_kernel, HermitianKernel2, PARITY_EIGENVALUES};

use crate::{Error, Result};
use num_complex::Complex64;

/// Doubled-angle coordinates of a spin phase-space point.
///
/// The kernel depends only on `2 theta` and `2 phi`, so the ranges
/// `theta in [0, pi/2]`, `phi in [0, pi)` already cover the full sphere;
/// the third Euler angle cancels and is not represented.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinAngle {
    theta: f64,
    phi: f64,
}

impl SpinAngle {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite { what: "theta", value: theta });
        }
        if !phi.is_finite() {
            return Err(Error::NonFinite { what: "phi", value: phi });
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::OutOfRange {
                what: "theta",
                detail: format!("{theta} not in [0, pi/2]"),
            });
        }
        if !(0.0..std::f64::consts::PI).contains(&phi) {
            return Err(Error::OutOfRange {
                what: "phi",
                detail: format!("{phi} not in [0, pi)"),
            });
        }
        Ok(Self { theta, phi })
    }

    /// Kernel angles for a sphere-surface direction `(Theta, Phi_az)` with
    /// `Theta in [0, pi]`, `Phi_az in [0, 2 pi)`; the doubled-angle map.
    pub fn from_surface(cap_theta: f64, cap_phi: f64) -> Result<Self> {
        Self::new(0.5 * cap_theta, 0.5 * cap_phi)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// A point of a single mode's phase space (dimensionless q, p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::NonFinite { what: "q", value: q });
        }
        if !p.is_finite() {
            return Err(Error::NonFinite { what: "p", value: p });
        }
        Ok(Self { q, p })
    }

    /// Coherent label `alpha = (q + i p) / sqrt(2)`.
    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.q, self.p) / std::f64::consts::SQRT_2
    }
}

/// One oscillator-mode factor of a product ket: a coherent displacement
/// applied to a Fock state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEntry {
    /// Coherent displacement `xi` (zero for plain Fock states).
    pub displacement: Complex64,
    /// Fock index `n >= 0`.
    pub fock: u32,
}

impl ModeEntry {
    pub fn fock(n: u32) -> Self {
        Self { displacement: Complex64::ZERO, fock: n }
    }

    pub fn displaced(xi: Complex64, n: u32) -> Self {
        Self { displacement: xi, fock: n }
    }

    /// Key for exact ket identity (bitwise on the displacement).
    pub(crate) fn key(&self) -> (u32, u64, u64) {
        (self.fock, self.displacement.re.to_bits(), self.displacement.im.to_bits())
    }
}
