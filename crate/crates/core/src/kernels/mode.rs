//! Per-mode kernel contributions for each reduction directive.

use super::displaced::displaced_fock_element;
use super::hermite::{hermite_value, Representation, MAX_FOCK};
use super::{ModeEntry, PhasePoint};
use crate::{Error, Result};
use num_complex::Complex64;

const INV_PI: f64 = std::f64::consts::FRAC_1_PI;

/// What to do with one oscillator-mode factor when reducing the Wigner
/// function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeDirective {
    /// Integrate the mode out entirely (operator trace).
    Trace,
    /// Keep the full Wigner dependence at one phase point.
    Fixed(PhasePoint),
    /// Integrate momentum out, evaluate the position density factor at q.
    PositionMarginal(f64),
    /// Integrate position out, evaluate the momentum density factor at p.
    MomentumMarginal(f64),
}

fn check_finite(what: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { what, value })
    }
}

/// Position (or momentum) wavefunction of the displaced Fock state
/// `D(xi)|n>`: with `xi = (q0 + i p0)/sqrt(2)`,
/// `phi(x) = e^{-i q0 p0 / 2} e^{i p0 x} psi_n(x - q0)` and the Fourier
/// image `phi~(p) = (-i)^n e^{+i q0 p0 / 2} e^{-i p q0} psi_n(p - p0)`.
pub fn displaced_wavefunction(entry: &ModeEntry, x: f64, rep: Representation) -> Result<Complex64> {
    if entry.fock > MAX_FOCK {
        return Err(Error::FockTooLarge(entry.fock, MAX_FOCK));
    }
    check_finite("wavefunction argument", x)?;
    let q0 = std::f64::consts::SQRT_2 * entry.displacement.re;
    let p0 = std::f64::consts::SQRT_2 * entry.displacement.im;
    Ok(match rep {
        Representation::Position => {
            let envelope = hermite_value(entry.fock, x - q0);
            Complex64::from_polar(1.0, p0 * x - 0.5 * q0 * p0) * envelope
        }
        Representation::Momentum => {
            let envelope = hermite_value(entry.fock, x - p0);
            let fourier = Complex64::new(0.0, -1.0).powu(entry.fock);
            fourier * Complex64::from_polar(1.0, 0.5 * q0 * p0 - x * q0) * envelope
        }
    })
}

/// Contribution of one mode factor of the operator `|ket><bra|` to a reduced
/// Wigner contraction.
///
/// * `Trace`: the overlap `<bra|ket> = e^{i Im(gamma^* beta)} <n|D(beta-gamma)|m>`.
/// * `Fixed(q, p)`: the Wigner transform of `|ket><bra|` at that point,
///   normalized so a density operator integrates to 1 per mode
///   (`w_00(q,p) = e^{-q^2-p^2}/pi`). Evaluated through the displaced-parity
///   identity `Pi(alpha) = D(2 alpha) Pi`; the cross-term phase branch
///   (`(-1)^m` on the ket index together with `<n|D(2 alpha)|m>`) is the one
///   calibrated against the quadrature transform.
/// * `PositionMarginal(q)`: `phi_ket(q) conj(phi_bra(q))`.
/// * `MomentumMarginal(p)`: the same in the momentum representation.
pub fn mode_kernel(ket: &ModeEntry, bra: &ModeEntry, directive: ModeDirective) -> Result<Complex64> {
    if ket.fock > MAX_FOCK {
        return Err(Error::FockTooLarge(ket.fock, MAX_FOCK));
    }
    if bra.fock > MAX_FOCK {
        return Err(Error::FockTooLarge(bra.fock, MAX_FOCK));
    }
    let beta = ket.displacement;
    let gamma = bra.displacement;
    match directive {
        ModeDirective::Trace => {
            let phase = Complex64::new(0.0, (gamma.conj() * beta).im).exp();
            Ok(phase * displaced_fock_element(bra.fock, beta - gamma, ket.fock))
        }
        ModeDirective::Fixed(point) => {
            check_finite("q", point.q)?;
            check_finite("p", point.p)?;
            let alpha = point.alpha();
            let shift = 2.0 * alpha - gamma;
            // both exponents are purely imaginary by construction
            let phase1 = gamma.conj() * alpha - gamma * alpha.conj();
            let phase2 = 0.5 * (shift.conj() * beta - shift * beta.conj());
            let parity = if ket.fock.is_multiple_of(2) { 1.0 } else { -1.0 };
            Ok(INV_PI
                * parity
                * (phase1 + phase2).exp()
                * displaced_fock_element(bra.fock, shift - beta, ket.fock))
        }
        ModeDirective::PositionMarginal(q) => {
            check_finite("q", q)?;
            let k = displaced_wavefunction(ket, q, Representation::Position)?;
            let b = displaced_wavefunction(bra, q, Representation::Position)?;
            Ok(k * b.conj())
        }
        ModeDirective::MomentumMarginal(p) => {
            check_finite("p", p)?;
            let k = displaced_wavefunction(ket, p, Representation::Momentum)?;
            let b = displaced_wavefunction(bra, p, Representation::Momentum)?;
            Ok(k * b.conj())
        }
    }
}
