//! Reduced Wigner evaluation by term-pairwise contraction.
//!
//! A [`ReductionPlan`] assigns one directive to every factor of a state's
//! signature. Evaluation never materializes dense tensors: each dyad
//! `coeff |ket><bra|` contributes the product of its per-factor kernel
//! values, summed in a fixed term order so results are bit-reproducible
//! regardless of how grid sweeps are scheduled.

use crate::kernels::{mode_kernel, spin_kernel, ModeDirective, PhasePoint, SpinAngle};
use crate::states::{
    DensityOperator, Factor, FactorState, ProductKet, StateVector, SystemSignature,
};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest number of spins that may stay unreduced in one plan.
const MAX_KEPT_SPINS: usize = 8;

/// Conditional traces below this are reported as underflow (node regions).
pub const BLOCH_UNDERFLOW: f64 = 1e-12;

/// Per-factor reduction directive. Mode factors admit `Trace`, `Fixed`,
/// `PositionMarginal` and `MomentumMarginal`; spin factors admit `Trace`,
/// `SphereAngle` and `EqualAngle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Directive {
    Trace,
    Fixed(PhasePoint),
    PositionMarginal(f64),
    MomentumMarginal(f64),
    SphereAngle(SpinAngle),
    EqualAngle(u8),
}

/// One directive per signature factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionPlan {
    directives: Vec<Directive>,
}

impl ReductionPlan {
    pub fn new(directives: Vec<Directive>) -> Self {
        Self { directives }
    }

    /// Everything integrated out.
    pub fn trace_all(signature: &SystemSignature) -> Self {
        Self {
            directives: vec![Directive::Trace; signature.len()],
        }
    }

    pub fn directives(&self) -> &[Directive] {
        &self.directives
    }

    pub fn set(&mut self, index: usize, directive: Directive) -> &mut Self {
        self.directives[index] = directive;
        self
    }

    /// Put the three modes of `electron` on position marginals at `q`.
    pub fn set_position_marginal(
        &mut self,
        signature: &SystemSignature,
        electron: u8,
        q: [f64; 3],
    ) -> Result<&mut Self> {
        let idx = signature.mode_indices(electron).ok_or_else(|| {
            Error::SignatureMismatch(format!("electron {electron} has no mode factors"))
        })?;
        for (i, qi) in idx.into_iter().zip(q) {
            self.directives[i] = Directive::PositionMarginal(qi);
        }
        Ok(self)
    }

    /// Keep the spin of `electron` on an equal-angle group.
    pub fn set_equal_angle(
        &mut self,
        signature: &SystemSignature,
        electron: u8,
        group: u8,
    ) -> Result<&mut Self> {
        let i = signature.spin_index(electron).ok_or_else(|| {
            Error::SignatureMismatch(format!("electron {electron} has no spin factor"))
        })?;
        self.directives[i] = Directive::EqualAngle(group);
        Ok(self)
    }

    pub fn validate(&self, signature: &SystemSignature) -> Result<()> {
        if self.directives.len() != signature.len() {
            return Err(Error::SignatureMismatch(format!(
                "plan has {} directives, signature has {} factors",
                self.directives.len(),
                signature.len()
            )));
        }
        for (i, (d, f)) in self.directives.iter().zip(signature.factors()).enumerate() {
            let ok = match f {
                Factor::Mode { .. } => matches!(
                    d,
                    Directive::Trace
                        | Directive::Fixed(_)
                        | Directive::PositionMarginal(_)
                        | Directive::MomentumMarginal(_)
                ),
                Factor::Spin { .. } => matches!(
                    d,
                    Directive::Trace | Directive::SphereAngle(_) | Directive::EqualAngle(_)
                ),
            };
            if !ok {
                return Err(Error::SignatureMismatch(format!(
                    "directive {d:?} does not apply to factor {i} ({f:?})"
                )));
            }
        }
        Ok(())
    }
}

/// A real Wigner value plus the magnitude of the imaginary residue left by
/// the contraction (must stay below 1e-10 for Hermitian operators).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerValue {
    pub value: f64,
    pub residual: f64,
}

/// Partial contraction of a density operator: every factor reduced except
/// the equal-angle spins, which remain as a small operator.
///
/// Basis convention: kept spins are ordered by factor index; bit `i` of a
/// basis pattern is the state of kept spin `i` (0 = up, 1 = down), so pattern
/// indices run over `0..2^k`.
#[derive(Debug, Clone)]
pub struct SpinSection {
    kept: Vec<usize>,
    groups: Vec<u8>,
    dim: usize,
    matrix: Vec<Complex64>,
}

impl SpinSection {
    /// Contract `rho` under `plan`, leaving the equal-angle spins open.
    pub fn contract(rho: &DensityOperator, plan: &ReductionPlan) -> Result<Self> {
        plan.validate(rho.signature())?;
        let kept: Vec<usize> = plan
            .directives()
            .iter()
            .enumerate()
            .filter_map(|(i, d)| matches!(d, Directive::EqualAngle(_)).then_some(i))
            .collect();
        if kept.len() > MAX_KEPT_SPINS {
            return Err(Error::OutOfRange {
                what: "kept spins",
                detail: format!("{} exceeds {MAX_KEPT_SPINS}", kept.len()),
            });
        }
        let groups: Vec<u8> = kept
            .iter()
            .map(|&i| match plan.directives()[i] {
                Directive::EqualAngle(g) => g,
                _ => unreachable!(),
            })
            .collect();
        let dim = 1usize << kept.len();
        let mut matrix = vec![Complex64::ZERO; dim * dim];

        for (coeff, ket, bra) in rho.terms() {
            let mut scalar = *coeff;
            let mut ket_pattern = 0usize;
            let mut bra_pattern = 0usize;
            let mut kept_seen = 0usize;
            for (i, directive) in plan.directives().iter().enumerate() {
                match (ket.entry(i), bra.entry(i), directive) {
                    (FactorState::Mode(mk), FactorState::Mode(mb), d) => {
                        let md = match d {
                            Directive::Trace => ModeDirective::Trace,
                            Directive::Fixed(pt) => ModeDirective::Fixed(*pt),
                            Directive::PositionMarginal(q) => ModeDirective::PositionMarginal(*q),
                            Directive::MomentumMarginal(p) => ModeDirective::MomentumMarginal(*p),
                            _ => unreachable!("validated"),
                        };
                        scalar *= mode_kernel(mk, mb, md)?;
                    }
                    (FactorState::Spin(sk), FactorState::Spin(sb), Directive::Trace) => {
                        if sk != sb {
                            scalar = Complex64::ZERO;
                        }
                    }
                    (FactorState::Spin(sk), FactorState::Spin(sb), Directive::SphereAngle(a)) => {
                        scalar *= spin_kernel(*a).element(sb.index(), sk.index());
                    }
                    (FactorState::Spin(sk), FactorState::Spin(sb), Directive::EqualAngle(_)) => {
                        ket_pattern |= sk.index() << kept_seen;
                        bra_pattern |= sb.index() << kept_seen;
                        kept_seen += 1;
                    }
                    _ => unreachable!("plan validated against signature"),
                }
                if scalar == Complex64::ZERO {
                    break;
                }
            }
            if scalar != Complex64::ZERO {
                matrix[ket_pattern * dim + bra_pattern] += scalar;
            }
        }
        Ok(Self { kept, groups, dim, matrix })
    }

    pub fn kept_spins(&self) -> &[usize] {
        &self.kept
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Standard matrix element `<ket_pattern| section |bra_pattern>`.
    pub fn element(&self, ket_pattern: usize, bra_pattern: usize) -> Complex64 {
        self.matrix[ket_pattern * self.dim + bra_pattern]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.element(i, i)).sum()
    }

    /// Contract the open spins with their group kernels; `angles[g]` is the
    /// angle of equal-angle group `g`.
    pub fn wigner_at(&self, angles: &[SpinAngle]) -> Result<WignerValue> {
        let mut kernels = Vec::with_capacity(self.kept.len());
        for &g in &self.groups {
            let angle = angles
                .get(g as usize)
                .copied()
                .ok_or(Error::MissingAngle(g))?;
            kernels.push(spin_kernel(angle));
        }
        let mut acc = Complex64::ZERO;
        for kp in 0..self.dim {
            for bp in 0..self.dim {
                let m = self.element(kp, bp);
                if m == Complex64::ZERO {
                    continue;
                }
                let mut prod = Complex64::ONE;
                for (i, kernel) in kernels.iter().enumerate() {
                    prod *= kernel.element((bp >> i) & 1, (kp >> i) & 1);
                }
                acc += m * prod;
            }
        }
        Ok(WignerValue { value: acc.re, residual: acc.im.abs() })
    }

    /// `<pure| section |pure> / trace(section)` for a pure state over the
    /// kept spins, given as `2^k` amplitudes in pattern order.
    pub fn fidelity_with_pure(&self, amplitudes: &[Complex64]) -> Result<f64> {
        if amplitudes.len() != self.dim {
            return Err(Error::OutOfRange {
                what: "pure-state amplitudes",
                detail: format!("{} amplitudes for dimension {}", amplitudes.len(), self.dim),
            });
        }
        let trace = self.trace().re;
        if trace.abs() < BLOCH_UNDERFLOW {
            return Err(Error::OutOfRange {
                what: "section trace",
                detail: format!("{trace} too small to condition on"),
            });
        }
        let mut acc = Complex64::ZERO;
        for kp in 0..self.dim {
            for bp in 0..self.dim {
                acc += amplitudes[kp].conj() * self.element(kp, bp) * amplitudes[bp];
            }
        }
        Ok(acc.re / trace)
    }
}

/// Evaluate the reduced Wigner functional of `rho` under `plan`;
/// `angles[g]` assigns the angle of equal-angle group `g`.
pub fn evaluate(
    rho: &DensityOperator,
    plan: &ReductionPlan,
    angles: &[SpinAngle],
) -> Result<WignerValue> {
    SpinSection::contract(rho, plan)?.wigner_at(angles)
}

/// Spatial probability density of one electron: its modes on position
/// marginals, everything else traced out.
pub fn position_density(rho: &DensityOperator, electron: u8, q: [f64; 3]) -> Result<f64> {
    let mut plan = ReductionPlan::trace_all(rho.signature());
    plan.set_position_marginal(rho.signature(), electron, q)?;
    Ok(evaluate(rho, &plan, &[])?.value)
}

/// Conditional Bloch vector at a spatial point; `vector` is zeroed and
/// `underflow` set where the conditioning weight drops below
/// [`BLOCH_UNDERFLOW`] (wavefunction nodes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSample {
    pub vector: [f64; 3],
    /// Conditioning weight `Tr[rho~(q)]`, the position density.
    pub weight: f64,
    pub underflow: bool,
}

/// Bloch vector of `spin_electron`'s spin conditioned on finding
/// `pos_electron` at `q`: `s_k = Tr[rho~(q) sigma_k] / Tr[rho~(q)]`.
pub fn bloch_field(
    rho: &DensityOperator,
    spin_electron: u8,
    pos_electron: u8,
    q: [f64; 3],
) -> Result<BlochSample> {
    let sig = rho.signature();
    let mut plan = ReductionPlan::trace_all(sig);
    plan.set_position_marginal(sig, pos_electron, q)?;
    plan.set_equal_angle(sig, spin_electron, 0)?;
    let section = SpinSection::contract(rho, &plan)?;
    let trace = section.trace().re;
    if trace.abs() < BLOCH_UNDERFLOW {
        return Ok(BlochSample { vector: [0.0; 3], weight: trace, underflow: true });
    }
    let m01 = section.element(0, 1);
    let m10 = section.element(1, 0);
    let sx = (m01 + m10).re;
    let sy = (Complex64::i() * (m01 - m10)).re;
    let sz = (section.element(0, 0) - section.element(1, 1)).re;
    Ok(BlochSample {
        vector: [sx / trace, sy / trace, sz / trace],
        weight: trace,
        underflow: false,
    })
}

fn hermitian_sqrt(g: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = g.clone().symmetric_eigen();
    let mut diag = DMatrix::<Complex64>::zeros(g.nrows(), g.ncols());
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        diag[(i, i)] = Complex64::new(lambda.max(0.0).sqrt(), 0.0);
    }
    &eig.eigenvectors * diag * eig.eigenvectors.adjoint()
}

/// Von Neumann entropy (base 2) of the reduced state over `subset` factor
/// indices, computed in the exact finite ket basis. Non-orthogonal
/// (displaced) kets are handled through their Gram matrices.
pub fn entanglement_entropy(psi: &StateVector, subset: &[usize]) -> Result<f64> {
    let norm = psi.norm()?;
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm * norm));
    }
    let n = psi.signature().len();
    let mut in_subset = vec![false; n];
    for &i in subset {
        if i >= n {
            return Err(Error::SignatureMismatch(format!(
                "factor index {i} out of range for signature of length {n}"
            )));
        }
        in_subset[i] = true;
    }

    let split = |ket: &ProductKet| -> (Vec<FactorState>, Vec<FactorState>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, e) in ket.entries().iter().enumerate() {
            if in_subset[i] {
                a.push(*e);
            } else {
                b.push(*e);
            }
        }
        (a, b)
    };

    // index the distinct sub-kets on each side
    let mut a_kets: Vec<ProductKet> = Vec::new();
    let mut b_kets: Vec<ProductKet> = Vec::new();
    let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
    for (amp, ket) in psi.terms() {
        let (a, b) = split(ket);
        let a = ProductKet::new(a);
        let b = ProductKet::new(b);
        let ai = match a_kets.iter().position(|k| *k == a) {
            Some(i) => i,
            None => {
                a_kets.push(a);
                a_kets.len() - 1
            }
        };
        let bi = match b_kets.iter().position(|k| *k == b) {
            Some(i) => i,
            None => {
                b_kets.push(b);
                b_kets.len() - 1
            }
        };
        entries.push((ai, bi, *amp));
    }
    let (na, nb) = (a_kets.len(), b_kets.len());
    let mut m = DMatrix::<Complex64>::zeros(na, nb);
    for (ai, bi, amp) in entries {
        m[(ai, bi)] += amp;
    }

    let gram = |kets: &[ProductKet]| -> Result<DMatrix<Complex64>> {
        let n = kets.len();
        let mut g = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = crate::states::ket_overlap(&kets[i], &kets[j])?;
            }
        }
        Ok(g)
    };
    let xa = hermitian_sqrt(&gram(&a_kets)?);
    let xb = hermitian_sqrt(&gram(&b_kets)?);

    // Schmidt coefficients of psi are the singular values of X_A M conj(X_B)
    let k = xa * m * xb.conjugate();
    let svd = k.svd(false, false);
    let mut entropy = 0.0;
    let mut total = 0.0;
    for &s in svd.singular_values.iter() {
        let lambda = (s * s).max(0.0);
        total += lambda;
        if lambda > 1e-15 {
            entropy -= lambda * lambda.log2();
        }
    }
    debug_assert!((total - 1.0).abs() < 1e-8, "Schmidt weights sum to {total}");
    Ok(entropy)
}

/// `Tr[rho1 rho2]` by exact ket algebra.
pub fn overlap(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    if rho1.signature() != rho2.signature() {
        return Err(Error::SignatureMismatch(
            "operator overlap needs matching signatures".into(),
        ));
    }
    let mut acc = Complex64::ZERO;
    for (c1, k1, b1) in rho1.terms() {
        for (c2, k2, b2) in rho2.terms() {
            let o12 = crate::states::ket_overlap(b1, k2)?;
            if o12 == Complex64::ZERO {
                continue;
            }
            let o21 = crate::states::ket_overlap(b2, k1)?;
            acc += c1 * c2 * o12 * o21;
        }
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests;
