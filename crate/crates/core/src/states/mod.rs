//! Composite-system signatures, product kets and sparse state algebra.

mod builders;

pub use builders::{
    build_helium, build_jm_state, build_orbital, build_pi_bond, build_reference_spin_state,
    clebsch_gordan_ls, slater_determinant, spin_orbital, HeliumState, OrbitalLabel, PiBondKind,
    ReferencePanel,
};

use crate::kernels::{mode_kernel, ModeDirective, ModeEntry};
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;

/// Cartesian mode axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// One factor of the composite Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    Mode { axis: Axis, electron: u8 },
    Spin { electron: u8 },
}

/// Ordered list of factors; every ket in a state conforms to it.
///
/// The canonical electron layout is `x, y, z, spin` per electron, but any
/// unique layout is accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSignature {
    factors: Vec<Factor>,
}

impl SystemSignature {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for f in &factors {
            if !seen.insert(*f) {
                return Err(Error::SignatureMismatch(format!("duplicate factor {f:?}")));
            }
        }
        Ok(Self { factors })
    }

    /// `n` electrons, each with three modes and a spin.
    pub fn electrons(n: u8) -> Self {
        let mut factors = Vec::with_capacity(4 * n as usize);
        for e in 0..n {
            for axis in Axis::ALL {
                factors.push(Factor::Mode { axis, electron: e });
            }
            factors.push(Factor::Spin { electron: e });
        }
        Self { factors }
    }

    /// Bare spins, no spatial modes (reference states).
    pub fn spins(n: u8) -> Self {
        Self {
            factors: (0..n).map(|e| Factor::Spin { electron: e }).collect(),
        }
    }

    /// Three modes of one electron, no spin (orbital building block).
    pub fn modes_of(electron: u8) -> Self {
        Self {
            factors: Axis::ALL
                .into_iter()
                .map(|axis| Factor::Mode { axis, electron })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn electron_count(&self) -> u8 {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Mode { electron, .. } | Factor::Spin { electron } => electron + 1,
            })
            .max()
            .unwrap_or(0)
    }

    /// Indices of the x, y, z mode factors of an electron, if all present.
    pub fn mode_indices(&self, electron: u8) -> Option<[usize; 3]> {
        let find = |axis| {
            self.factors
                .iter()
                .position(|f| *f == Factor::Mode { axis, electron })
        };
        Some([find(Axis::X)?, find(Axis::Y)?, find(Axis::Z)?])
    }

    pub fn spin_index(&self, electron: u8) -> Option<usize> {
        self.factors
            .iter()
            .position(|f| *f == Factor::Spin { electron })
    }

    pub fn spin_indices(&self) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter_map(|(i, f)| matches!(f, Factor::Spin { .. }).then_some(i))
            .collect()
    }
}

/// Spin-1/2 basis state; up is index 0 in all 2x2 kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinState {
    Up,
    Down,
}

impl SpinState {
    pub fn index(self) -> usize {
        match self {
            SpinState::Up => 0,
            SpinState::Down => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            SpinState::Up => SpinState::Down,
            SpinState::Down => SpinState::Up,
        }
    }
}

/// State of one factor inside a product ket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FactorState {
    Mode(ModeEntry),
    Spin(SpinState),
}

/// Exact-identity key of a ket: one tagged tuple per factor, with
/// displacements compared bitwise.
type KetKey = Vec<(u8, u32, u64, u64)>;

/// One basis ket of the composite system.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductKet {
    entries: Vec<FactorState>,
}

impl ProductKet {
    pub fn new(entries: Vec<FactorState>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[FactorState] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &FactorState {
        &self.entries[i]
    }

    fn conforms_to(&self, signature: &SystemSignature) -> bool {
        self.entries.len() == signature.len()
            && self.entries.iter().zip(signature.factors()).all(|(e, f)| {
                matches!(
                    (e, f),
                    (FactorState::Mode(_), Factor::Mode { .. })
                        | (FactorState::Spin(_), Factor::Spin { .. })
                )
            })
    }

    fn key(&self) -> KetKey {
        self.entries
            .iter()
            .map(|e| match e {
                FactorState::Mode(m) => {
                    let (n, re, im) = m.key();
                    (0u8, n, re, im)
                }
                FactorState::Spin(s) => (1u8, s.index() as u32, 0, 0),
            })
            .collect()
    }
}

/// `<bra_ket | ket_ket>` as a product of per-factor overlaps; displaced mode
/// entries use the exact displaced-Fock overlap.
pub fn ket_overlap(bra: &ProductKet, ket: &ProductKet) -> Result<Complex64> {
    debug_assert_eq!(bra.entries.len(), ket.entries.len());
    let mut acc = Complex64::ONE;
    for (b, k) in bra.entries.iter().zip(&ket.entries) {
        match (b, k) {
            (FactorState::Spin(sb), FactorState::Spin(sk)) => {
                if sb != sk {
                    return Ok(Complex64::ZERO);
                }
            }
            (FactorState::Mode(mb), FactorState::Mode(mk)) => {
                acc *= mode_kernel(mk, mb, ModeDirective::Trace)?;
            }
            _ => {
                return Err(Error::SignatureMismatch(
                    "kets mix spin and mode factors at the same position".into(),
                ))
            }
        }
        if acc == Complex64::ZERO {
            return Ok(acc);
        }
    }
    Ok(acc)
}

/// Normalized sparse superposition of product kets.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    signature: SystemSignature,
    terms: Vec<(Complex64, ProductKet)>,
}

impl StateVector {
    /// Merge duplicate kets, drop cancelled terms and normalize.
    /// Exactly cancelling superpositions (Pauli-excluded determinants) come
    /// out empty and are reported as [`Error::ZeroNorm`].
    pub fn normalized(
        signature: SystemSignature,
        terms: Vec<(Complex64, ProductKet)>,
    ) -> Result<Self> {
        for (_, ket) in &terms {
            if !ket.conforms_to(&signature) {
                return Err(Error::SignatureMismatch(
                    "ket does not conform to signature".into(),
                ));
            }
        }
        let mut merged: Vec<(Complex64, ProductKet)> = Vec::new();
        let mut index: HashMap<KetKey, usize> = HashMap::new();
        for (amp, ket) in terms {
            match index.entry(ket.key()) {
                std::collections::hash_map::Entry::Occupied(slot) => {
                    merged[*slot.get()].0 += amp;
                }
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(merged.len());
                    merged.push((amp, ket));
                }
            }
        }
        let peak = merged.iter().map(|(a, _)| a.norm()).fold(0.0f64, f64::max);
        merged.retain(|(a, _)| a.norm() > 1e-14 * peak);
        if merged.is_empty() {
            return Err(Error::ZeroNorm);
        }

        let mut state = Self { signature, terms: merged };
        let norm = state.norm()?;
        if norm < 1e-12 {
            return Err(Error::ZeroNorm);
        }
        for (amp, _) in &mut state.terms {
            *amp /= norm;
        }
        Ok(state)
    }

    pub fn signature(&self) -> &SystemSignature {
        &self.signature
    }

    pub fn terms(&self) -> &[(Complex64, ProductKet)] {
        &self.terms
    }

    /// `sqrt(<psi|psi>)` including displaced-ket overlaps.
    pub fn norm(&self) -> Result<f64> {
        let n2 = self.inner(self)?;
        Ok(n2.re.max(0.0).sqrt())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(
                "inner product of states over different signatures".into(),
            ));
        }
        let mut acc = Complex64::ZERO;
        for (ca, ka) in &self.terms {
            for (cb, kb) in &other.terms {
                let ov = ket_overlap(ka, kb)?;
                if ov != Complex64::ZERO {
                    acc += ca.conj() * cb * ov;
                }
            }
        }
        Ok(acc)
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }
}

/// Sparse Hermitian operator as a sum of ket-bra dyads.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    signature: SystemSignature,
    terms: Vec<(Complex64, ProductKet, ProductKet)>,
}

impl DensityOperator {
    pub fn from_pure(psi: &StateVector) -> Self {
        let mut terms = Vec::with_capacity(psi.terms.len() * psi.terms.len());
        for (ci, ki) in &psi.terms {
            for (cj, kj) in &psi.terms {
                terms.push((ci * cj.conj(), ki.clone(), kj.clone()));
            }
        }
        Self {
            signature: psi.signature.clone(),
            terms,
        }
    }

    /// Build an operator from explicit dyad terms (mixed states, raw qubit
    /// matrices). Kets must conform to the signature; Hermiticity is the
    /// caller's responsibility and can be checked with
    /// [`hermiticity_defect`](Self::hermiticity_defect).
    pub fn new(
        signature: SystemSignature,
        terms: Vec<(Complex64, ProductKet, ProductKet)>,
    ) -> Result<Self> {
        for (_, ket, bra) in &terms {
            if !ket.conforms_to(&signature) || !bra.conforms_to(&signature) {
                return Err(Error::SignatureMismatch(
                    "dyad does not conform to signature".into(),
                ));
            }
        }
        Ok(Self { signature, terms })
    }

    /// Largest coefficient mismatch between the operator and its adjoint,
    /// after merging dyads with identical (ket, bra) keys.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut merged: HashMap<(KetKey, KetKey), Complex64> = HashMap::new();
        for (c, ket, bra) in &self.terms {
            *merged.entry((ket.key(), bra.key())).or_default() += c;
        }
        let mut defect: f64 = 0.0;
        for ((ket_key, bra_key), &c) in &merged {
            let adjoint = merged
                .get(&(bra_key.clone(), ket_key.clone()))
                .copied()
                .unwrap_or_default();
            defect = defect.max((c - adjoint.conj()).norm());
        }
        defect
    }

    pub fn signature(&self) -> &SystemSignature {
        &self.signature
    }

    /// Coefficient, ket, bra triples: the operator is
    /// `sum_k coeff_k |ket_k><bra_k|`.
    pub fn terms(&self) -> &[(Complex64, ProductKet, ProductKet)] {
        &self.terms
    }

    pub fn trace(&self) -> Result<Complex64> {
        let mut acc = Complex64::ZERO;
        for (c, ket, bra) in &self.terms {
            acc += c * ket_overlap(bra, ket)?;
        }
        Ok(acc)
    }
}
