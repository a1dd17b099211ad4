//! Brute-force reference implementations.
//!
//! These trade speed for independence: the Wigner transform is done by
//! direct quadrature, displacement elements by an operator power series with
//! a reported tail bound, and reduced contractions by building the kernel as
//! an explicit matrix over a truncated Fock basis. They certify the closed
//! forms in [`crate::kernels`] and [`crate::engine`], including the one-time
//! phase-branch calibration of the mode kernel.

use crate::engine::{Directive, ReductionPlan};
use crate::kernels::{hermite_wavefunction, Representation, SpinAngle};
use crate::quad::GaussHermite;
use crate::states::{DensityOperator, Factor, FactorState, ProductKet};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense contractions refuse to build anything larger than this.
pub const MAX_DENSE_DIM: usize = 4096;

/// Wigner transform of `|m><n|` at `(q, p)` by Gauss-Hermite quadrature of
/// `(1/pi) int psi_m(q+y) psi_n(q-y) e^{-2ipy} dy`; accurate to better than
/// 1e-10 for `m, n <= 12` and moderate `|p|`.
pub fn wigner_quadrature(m: u32, n: u32, q: f64, p: f64) -> Result<Complex64> {
    assert!(m <= 12 && n <= 12, "quadrature oracle certified for m, n <= 12");
    let rule = GaussHermite::new(128);
    let mut acc = Complex64::ZERO;
    for (y, w) in rule.nodes() {
        let a = hermite_wavefunction(m, q + y, Representation::Position)?;
        let b = hermite_wavefunction(n, q - y, Representation::Position)?;
        // strip the Gauss-Hermite weight: the product of the two Gaussian
        // envelopes contributes e^{-q^2 - y^2}
        let phase = Complex64::from_polar(1.0, -2.0 * p * y);
        acc += w * a * b * phase * (y * y).exp();
    }
    Ok(acc / std::f64::consts::PI)
}

/// Result of the truncated displacement series: the value plus a rigorous
/// bound on everything the truncation dropped.
#[derive(Debug, Clone, Copy)]
pub struct SeriesElement {
    pub value: Complex64,
    pub tail_bound: f64,
}

impl SeriesElement {
    pub fn is_converged(&self) -> bool {
        self.tail_bound <= 1e-10
    }
}

/// `<n| e^{xi a^dag - xi^* a} |m>` summed as an operator power series in a
/// truncated Fock space, with the dropped tail bounded by the operator-norm
/// estimate `||A^k |m>|| <= prod_j 2 |xi| sqrt(m + j + 1)`.
pub fn displaced_series(n: u32, xi: Complex64, m: u32, terms: u32) -> SeriesElement {
    assert!(terms >= 32, "series oracle needs at least 32 terms");
    let dim = (m + terms + 2) as usize;
    let n = n as usize;
    let m = m as usize;

    let mut total = vec![Complex64::ZERO; dim];
    let mut cur = vec![Complex64::ZERO; dim];
    cur[m] = Complex64::ONE;
    total[m] = Complex64::ONE;
    for k in 1..=terms as usize {
        let mut next = vec![Complex64::ZERO; dim];
        for (i, &c) in cur.iter().enumerate() {
            if c == Complex64::ZERO {
                continue;
            }
            if i + 1 < dim {
                next[i + 1] += xi * ((i + 1) as f64).sqrt() * c;
            }
            if i > 0 {
                next[i - 1] -= xi.conj() * (i as f64).sqrt() * c;
            }
        }
        let inv_k = 1.0 / (k as f64);
        for (t, v) in total.iter_mut().zip(&next) {
            *t += v * inv_k;
        }
        // rescale so `cur` holds A^k |m> / k!
        for (c, v) in cur.iter_mut().zip(&next) {
            *c = v * inv_k;
        }
    }

    // bound the tail sum_{k > terms} ||A^k|m>|| / k!
    let mut term_bound: f64 = 1.0;
    for j in 1..=terms as u64 {
        term_bound *= 2.0 * xi.norm() * ((m as f64) + j as f64 + 1.0).sqrt() / j as f64;
    }
    let mut tail = 0.0;
    let mut k = terms as u64 + 1;
    let mut b = term_bound * 2.0 * xi.norm() * ((m as f64) + k as f64 + 1.0).sqrt() / k as f64;
    loop {
        let ratio = 2.0 * xi.norm() * ((m as f64) + k as f64 + 2.0).sqrt() / (k + 1) as f64;
        if ratio < 0.5 {
            tail += b / (1.0 - ratio);
            break;
        }
        tail += b;
        k += 1;
        b *= ratio;
        if k > terms as u64 + 10_000 {
            tail = f64::INFINITY;
            break;
        }
    }
    SeriesElement { value: total[n], tail_bound: tail }
}

fn ladder_up(dim: usize) -> DMatrix<Complex64> {
    // a^dag in the truncated basis
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim - 1 {
        m[(i + 1, i)] = Complex64::new(((i + 1) as f64).sqrt(), 0.0);
    }
    m
}

/// `e^{xi a^dag - xi^* a}` by Hermitian eigendecomposition of the generator
/// (independent of the closed-form Laguerre route).
fn displacement_matrix(xi: Complex64, dim: usize) -> DMatrix<Complex64> {
    let adag = ladder_up(dim);
    let a = adag.adjoint();
    let generator = &adag * xi - &a * xi.conj();
    // generator is anti-Hermitian, so -i * generator is Hermitian
    let hermitian = &generator * Complex64::new(0.0, -1.0);
    let eig = hermitian.symmetric_eigen();
    let mut diag = DMatrix::<Complex64>::zeros(dim, dim);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        diag[(i, i)] = Complex64::from_polar(1.0, lambda);
    }
    &eig.eigenvectors * diag * eig.eigenvectors.adjoint()
}

fn parity_matrix(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

fn spin_kernel_by_rotation(angle: SpinAngle) -> DMatrix<Complex64> {
    // U pi U^dag with explicit rotation matrices rather than the closed
    // Bloch form: U = exp(i sigma_z phi) exp(i sigma_y theta)
    let (t, p) = (angle.theta(), angle.phi());
    let uz = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::from_polar(1.0, p),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::from_polar(1.0, -p),
        ],
    );
    let uy = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(t.cos(), 0.0),
            Complex64::new(t.sin(), 0.0),
            Complex64::new(-t.sin(), 0.0),
            Complex64::new(t.cos(), 0.0),
        ],
    );
    let u = uz * uy;
    let sqrt3 = 3.0f64.sqrt();
    let parity = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (1.0 + sqrt3), 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(0.5 * (1.0 - sqrt3), 0.0),
        ],
    );
    &u * parity * u.adjoint()
}

fn mode_cutoff(rho: &DensityOperator, factor: usize, directive: Directive) -> usize {
    let mut max_fock = 0u32;
    let mut budget: f64 = 0.0;
    for (_, ket, bra) in rho.terms() {
        for entry in [ket.entry(factor), bra.entry(factor)] {
            if let FactorState::Mode(m) = entry {
                max_fock = max_fock.max(m.fock);
                budget = budget.max(m.displacement.norm());
            }
        }
    }
    // truncated matrix exponentials only approximate D(eta); leave enough
    // levels above the states for the coherent tail of every displacement
    // in play, including the kernel's own D(2 alpha)
    if let Directive::Fixed(pt) = directive {
        budget += (2.0 * pt.alpha()).norm();
    }
    let headroom = if budget > 0.0 {
        (budget * budget + 10.0 * budget + 20.0).ceil() as usize
    } else {
        0
    };
    max_fock as usize + 1 + headroom
}

fn fock_vector(ket: &ProductKet, factor: usize, dim: usize) -> DVector<Complex64> {
    let entry = match ket.entry(factor) {
        FactorState::Mode(m) => m,
        FactorState::Spin(_) => unreachable!("mode factor expected"),
    };
    let mut basis = DVector::<Complex64>::zeros(dim);
    basis[entry.fock as usize] = Complex64::ONE;
    if entry.displacement == Complex64::ZERO {
        basis
    } else {
        displacement_matrix(entry.displacement, dim) * basis
    }
}

fn spin_vector(ket: &ProductKet, factor: usize) -> DVector<Complex64> {
    let s = match ket.entry(factor) {
        FactorState::Spin(s) => s,
        FactorState::Mode(_) => unreachable!("spin factor expected"),
    };
    let mut v = DVector::<Complex64>::zeros(2);
    v[s.index()] = Complex64::ONE;
    v
}

/// Evaluate `Tr[rho Pi(plan)]` by building the whole kernel operator as one
/// dense matrix over a truncated basis and applying it to dense ket vectors.
/// Refuses products larger than [`MAX_DENSE_DIM`].
pub fn dense_contract(
    rho: &DensityOperator,
    plan: &ReductionPlan,
    angles: &[SpinAngle],
) -> Result<Complex64> {
    plan.validate(rho.signature())?;
    let sig = rho.signature();

    // per-factor kernel matrices
    let mut kernels: Vec<DMatrix<Complex64>> = Vec::with_capacity(sig.len());
    let mut dims: Vec<usize> = Vec::with_capacity(sig.len());
    for (i, factor) in sig.factors().iter().enumerate() {
        let k = match (factor, plan.directives()[i]) {
            (Factor::Mode { .. }, directive) => {
                let dim = mode_cutoff(rho, i, directive);
                match directive {
                    Directive::Trace => DMatrix::identity(dim, dim),
                    Directive::Fixed(pt) => {
                        let alpha = pt.alpha();
                        displacement_matrix(2.0 * alpha, dim)
                            * parity_matrix(dim)
                            * Complex64::new(std::f64::consts::FRAC_1_PI, 0.0)
                    }
                    Directive::PositionMarginal(q) => DMatrix::from_fn(dim, dim, |r, c| {
                        let pr = hermite_wavefunction(r as u32, q, Representation::Position)
                            .expect("cutoff below MAX_FOCK");
                        let pc = hermite_wavefunction(c as u32, q, Representation::Position)
                            .expect("cutoff below MAX_FOCK");
                        pr.conj() * pc
                    }),
                    Directive::MomentumMarginal(p) => DMatrix::from_fn(dim, dim, |r, c| {
                        let pr = hermite_wavefunction(r as u32, p, Representation::Momentum)
                            .expect("cutoff below MAX_FOCK");
                        let pc = hermite_wavefunction(c as u32, p, Representation::Momentum)
                            .expect("cutoff below MAX_FOCK");
                        pr.conj() * pc
                    }),
                    _ => unreachable!("validated"),
                }
            }
            (Factor::Spin { .. }, Directive::Trace) => DMatrix::identity(2, 2),
            (Factor::Spin { .. }, Directive::SphereAngle(a)) => spin_kernel_by_rotation(a),
            (Factor::Spin { .. }, Directive::EqualAngle(g)) => {
                let a = angles
                    .get(g as usize)
                    .copied()
                    .ok_or(Error::MissingAngle(g))?;
                spin_kernel_by_rotation(a)
            }
            _ => unreachable!("validated"),
        };
        dims.push(k.nrows());
        kernels.push(k);
    }

    let total_dim: usize = dims.iter().product();
    if total_dim > MAX_DENSE_DIM {
        return Err(Error::DimensionOverflow(total_dim, MAX_DENSE_DIM));
    }

    let mut kernel = DMatrix::<Complex64>::identity(1, 1);
    for k in &kernels {
        kernel = kernel.kronecker(k);
    }

    let mut acc = Complex64::ZERO;
    for (coeff, ket, bra) in rho.terms() {
        let mut ket_vec = DMatrix::<Complex64>::identity(1, 1);
        let mut bra_vec = DMatrix::<Complex64>::identity(1, 1);
        for (i, factor) in sig.factors().iter().enumerate() {
            let (kv, bv) = match factor {
                Factor::Mode { .. } => (
                    fock_vector(ket, i, dims[i]),
                    fock_vector(bra, i, dims[i]),
                ),
                Factor::Spin { .. } => (spin_vector(ket, i), spin_vector(bra, i)),
            };
            ket_vec = ket_vec.kronecker(&DMatrix::from_column_slice(dims[i], 1, kv.as_slice()));
            bra_vec = bra_vec.kronecker(&DMatrix::from_column_slice(dims[i], 1, bv.as_slice()));
        }
        // Tr[|ket><bra| K] = <bra| K |ket>
        let value = (bra_vec.adjoint() * &kernel * ket_vec)[(0, 0)];
        acc += coeff * value;
    }
    Ok(acc)
}
