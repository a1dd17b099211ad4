//! Normalized oscillator eigenfunctions.

use crate::{Error, Result};
use num_complex::Complex64;

/// Largest Fock index the normalized recurrence is certified for.
pub const MAX_FOCK: u32 = 200;

/// Which representation the wavefunction is evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Position,
    Momentum,
}

/// psi_n evaluated through the recurrence on the *normalized* functions,
/// psi_{n+1} = q sqrt(2/(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1},
/// which stays bounded where the raw Hermite polynomials overflow.
/// Returns every level 0..=n at once.
pub(crate) fn hermite_levels(n: u32, q: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let psi0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * q * q).exp();
    out.push(psi0);
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * q * psi0);
    for k in 1..n {
        let k = k as f64;
        let next = q * (2.0 / (k + 1.0)).sqrt() * out[out.len() - 1]
            - (k / (k + 1.0)).sqrt() * out[out.len() - 2];
        out.push(next);
    }
    out
}

pub(crate) fn hermite_value(n: u32, q: f64) -> f64 {
    *hermite_levels(n, q).last().unwrap()
}

/// Oscillator eigenfunction in position or momentum representation.
///
/// Position: `psi_n(q) = (2^n n! sqrt(pi))^{-1/2} H_n(q) e^{-q^2/2}`.
/// Momentum: `(-i)^n psi_n(p)` under the Fourier convention
/// `psi~(p) = (2 pi)^{-1/2} \int psi(q) e^{-i q p} dq`.
pub fn hermite_wavefunction(n: u32, x: f64, rep: Representation) -> Result<Complex64> {
    if n > MAX_FOCK {
        return Err(Error::FockTooLarge(n, MAX_FOCK));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite { what: "argument", value: x });
    }
    let value = hermite_value(n, x);
    Ok(match rep {
        Representation::Position => Complex64::new(value, 0.0),
        // (-i)^n cycles through 1, -i, -1, i
        Representation::Momentum => match n % 4 {
            0 => Complex64::new(value, 0.0),
            1 => Complex64::new(0.0, -value),
            2 => Complex64::new(-value, 0.0),
            _ => Complex64::new(0.0, value),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ground_state_peak() {
        // pi^{-1/4}
        let v = hermite_wavefunction(0, 0.0, Representation::Position).unwrap();
        assert_abs_diff_eq!(v.re, 0.751_125_544_464_942_5, epsilon = 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn odd_parity_zero_at_origin() {
        let v = hermite_wavefunction(1, 0.0, Representation::Position).unwrap();
        assert_eq!(v.re, 0.0);
    }

    #[test]
    fn n2_against_closed_form() {
        // H_2(1) = 2, so psi_2(1) = 2 e^{-1/2} / sqrt(8 sqrt(pi));
        // reference value computed with 40-digit arithmetic.
        let v = hermite_wavefunction(2, 1.0, Representation::Position).unwrap();
        assert_abs_diff_eq!(v.re, 0.322_144_182_556_737_6, epsilon = 1e-15);
        let v6 = hermite_wavefunction(6, 1.3, Representation::Position).unwrap();
        assert_abs_diff_eq!(v6.re, 0.052_288_252_096_856_9, epsilon = 1e-14);
    }

    #[test]
    fn momentum_phase_cycle() {
        let p = 0.7;
        for n in 0..8u32 {
            let pos = hermite_wavefunction(n, p, Representation::Position).unwrap();
            let mom = hermite_wavefunction(n, p, Representation::Momentum).unwrap();
            let phase = Complex64::new(0.0, -1.0).powu(n);
            assert_abs_diff_eq!((mom - phase * pos).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn large_n_stays_finite() {
        let v = hermite_wavefunction(200, 3.0, Representation::Position).unwrap();
        assert!(v.re.is_finite());
        assert!(v.norm() < 1.0);
        assert!(hermite_wavefunction(201, 0.0, Representation::Position).is_err());
    }

    #[test]
    fn orthonormality_under_gauss_hermite() {
        // <psi_m|psi_n> with the e^{-q^2} weight factored out.
        let rule = crate::quad::GaussHermite::new(40);
        for (m, n) in [(0u32, 0u32), (3, 3), (5, 5), (2, 4), (1, 6)] {
            let dot = rule.integrate(|q| {
                let levels = hermite_levels(m.max(n), q);
                let w = (q * q).exp();
                levels[m as usize] * levels[n as usize] * w
            });
            let expect = if m == n { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(dot, expect, epsilon = 1e-12);
        }
    }
}
