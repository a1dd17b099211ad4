//! The SU(2) displaced parity kernel for a spin-1/2 factor.

use super::SpinAngle;
use num_complex::Complex64;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Kernel eigenvalues `(1 +/- sqrt(3)) / 2`.
pub const PARITY_EIGENVALUES: (f64, f64) = (0.5 * (1.0 + SQRT3), 0.5 * (1.0 - SQRT3));

/// A 2x2 Hermitian kernel in the `{|up>, |down>}` basis (index 0 = up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianKernel2 {
    m: [[Complex64; 2]; 2],
}

impl HermitianKernel2 {
    /// `<bra| K |ket>` with basis indices 0 = up, 1 = down.
    pub fn element(&self, bra: usize, ket: usize) -> Complex64 {
        self.m[bra][ket]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Largest |off-Hermitian| residual, diagnostic for the invariants.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        worst
    }
}

/// Rotated spin parity `U(theta, phi) pi U^dag(theta, phi)` with
/// `pi = (1 + sqrt(3) sigma_z)/2` and `U = exp(i sigma_z phi) exp(i sigma_y theta)`:
///
/// `(1/2) (I + sqrt(3) [cos(2 theta) sigma_z
///                      - sin(2 theta)(cos(2 phi) sigma_x - sin(2 phi) sigma_y)])`
///
/// so the Bloch axis is `n = (-sin2t cos2p, sin2t sin2p, cos2t)` and spin up
/// has its positive lobe at theta = 0 ("up points up").
pub fn spin_kernel(angle: SpinAngle) -> HermitianKernel2 {
    let (s2t, c2t) = (2.0 * angle.theta()).sin_cos();
    let (s2p, c2p) = (2.0 * angle.phi()).sin_cos();
    let nx = -s2t * c2p;
    let ny = s2t * s2p;
    let nz = c2t;
    // (1/2)(I + sqrt3 n.sigma) in matrix form
    let half = 0.5;
    let d = half * SQRT3;
    HermitianKernel2 {
        m: [
            [
                Complex64::new(half + d * nz, 0.0),
                Complex64::new(d * nx, -d * ny),
            ],
            [
                Complex64::new(d * nx, d * ny),
                Complex64::new(half - d * nz, 0.0),
            ],
        ],
    }
}
