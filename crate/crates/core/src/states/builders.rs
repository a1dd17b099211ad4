//! Builders for the model-atom states: reference spin states, oscillator
//! orbitals, spin-orbit coupled |j,m> states, helium spin states, Slater
//! determinants and LCAO pi-bond pseudo-molecules.

use super::{FactorState, ProductKet, SpinState, StateVector, SystemSignature};
use crate::kernels::ModeEntry;
use crate::{Error, Result};
use num_complex::Complex64;
use std::str::FromStr;

const SQRT1_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn spin_ket(spins: &[SpinState]) -> ProductKet {
    ProductKet::new(spins.iter().map(|s| FactorState::Spin(*s)).collect())
}

/// Reference spin panels, a through h.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferencePanel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl FromStr for ReferencePanel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Self::A),
            "b" | "B" => Ok(Self::B),
            "c" | "C" => Ok(Self::C),
            "d" | "D" => Ok(Self::D),
            "e" | "E" => Ok(Self::E),
            "f" | "F" => Ok(Self::F),
            "g" | "G" => Ok(Self::G),
            "h" | "H" => Ok(Self::H),
            other => Err(Error::UnknownLabel(other.into())),
        }
    }
}

/// The eight reference spin states:
/// a `|up>`, b `(|up>+|down>)/sqrt2`, c `|uu>`, d `|ud>`,
/// e `(|ud>-|du>)/sqrt2`, f `(|ud>+|du>)/sqrt2`, g `|udu>`,
/// h `(|ud>-|du>)/sqrt2 (x) |u>`.
pub fn build_reference_spin_state(panel: ReferencePanel) -> Result<StateVector> {
    use SpinState::{Down as Dn, Up};
    let one = re(1.0);
    let inv = re(SQRT1_2);
    match panel {
        ReferencePanel::A => {
            StateVector::normalized(SystemSignature::spins(1), vec![(one, spin_ket(&[Up]))])
        }
        ReferencePanel::B => StateVector::normalized(
            SystemSignature::spins(1),
            vec![(inv, spin_ket(&[Up])), (inv, spin_ket(&[Dn]))],
        ),
        ReferencePanel::C => {
            StateVector::normalized(SystemSignature::spins(2), vec![(one, spin_ket(&[Up, Up]))])
        }
        ReferencePanel::D => {
            StateVector::normalized(SystemSignature::spins(2), vec![(one, spin_ket(&[Up, Dn]))])
        }
        ReferencePanel::E => StateVector::normalized(
            SystemSignature::spins(2),
            vec![(inv, spin_ket(&[Up, Dn])), (-inv, spin_ket(&[Dn, Up]))],
        ),
        ReferencePanel::F => StateVector::normalized(
            SystemSignature::spins(2),
            vec![(inv, spin_ket(&[Up, Dn])), (inv, spin_ket(&[Dn, Up]))],
        ),
        ReferencePanel::G => StateVector::normalized(
            SystemSignature::spins(3),
            vec![(one, spin_ket(&[Up, Dn, Up]))],
        ),
        ReferencePanel::H => StateVector::normalized(
            SystemSignature::spins(3),
            vec![
                (inv, spin_ket(&[Up, Dn, Up])),
                (-inv, spin_ket(&[Dn, Up, Up])),
            ],
        ),
    }
}

/// Oscillator-model orbital labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitalLabel {
    OneS,
    TwoS,
    TwoPx,
    TwoPy,
    TwoPz,
    ThreeDxz,
    ThreeDyz,
    ThreeDz2,
}

impl FromStr for OrbitalLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1S" | "1s" => Ok(Self::OneS),
            "2S" | "2s" => Ok(Self::TwoS),
            "2Px" | "2px" => Ok(Self::TwoPx),
            "2Py" | "2py" => Ok(Self::TwoPy),
            "2Pz" | "2pz" => Ok(Self::TwoPz),
            "3Dxz" | "3dxz" => Ok(Self::ThreeDxz),
            "3Dyz" | "3dyz" => Ok(Self::ThreeDyz),
            "3Dz2" | "3dz2" => Ok(Self::ThreeDz2),
            other => Err(Error::UnknownLabel(other.into())),
        }
    }
}

fn orbital_terms(label: OrbitalLabel) -> Vec<(Complex64, [u32; 3])> {
    let s6 = (1.0f64 / 6.0).sqrt();
    let s3 = (1.0f64 / 3.0).sqrt();
    match label {
        OrbitalLabel::OneS => vec![(re(1.0), [0, 0, 0])],
        // the l = 0 member of the N = 2 shell: spherically symmetric with a
        // radial node at r^2 = 3/2
        OrbitalLabel::TwoS => vec![
            (re(s3), [2, 0, 0]),
            (re(s3), [0, 2, 0]),
            (re(s3), [0, 0, 2]),
        ],
        OrbitalLabel::TwoPx => vec![(re(1.0), [1, 0, 0])],
        OrbitalLabel::TwoPy => vec![(re(1.0), [0, 1, 0])],
        OrbitalLabel::TwoPz => vec![(re(1.0), [0, 0, 1])],
        OrbitalLabel::ThreeDxz => vec![(re(1.0), [1, 0, 1])],
        OrbitalLabel::ThreeDyz => vec![(re(1.0), [0, 1, 1])],
        OrbitalLabel::ThreeDz2 => vec![
            (re(2.0 * s6), [0, 0, 2]),
            (re(-s6), [2, 0, 0]),
            (re(-s6), [0, 2, 0]),
        ],
    }
}

fn mode_ket(fock: [u32; 3]) -> Vec<FactorState> {
    fock.iter()
        .map(|&n| FactorState::Mode(ModeEntry::fock(n)))
        .collect()
}

/// Spatial orbital as a three-mode state tagged with an electron label.
pub fn build_orbital(label: OrbitalLabel, electron: u8) -> Result<StateVector> {
    let terms = orbital_terms(label)
        .into_iter()
        .map(|(amp, fock)| (amp, ProductKet::new(mode_ket(fock))))
        .collect();
    StateVector::normalized(SystemSignature::modes_of(electron), terms)
}

/// Single-electron spin-orbital (three modes plus a spin, electron 0); the
/// building block fed to [`slater_determinant`].
pub fn spin_orbital(label: OrbitalLabel, spin: SpinState) -> Result<StateVector> {
    let terms = orbital_terms(label)
        .into_iter()
        .map(|(amp, fock)| {
            let mut entries = mode_ket(fock);
            entries.push(FactorState::Spin(spin));
            (amp, ProductKet::new(entries))
        })
        .collect();
    StateVector::normalized(SystemSignature::electrons(1), terms)
}

/// Closed-form Clebsch-Gordan coefficient for coupling orbital angular
/// momentum `l` with spin 1/2, Condon-Shortley phases. Spin and total
/// projections are passed doubled (`two_m_s = +/-1`, `two_j = 2l +/- 1`).
/// Violated selection rules yield zero rather than an error.
pub fn clebsch_gordan_ls(l: u32, m_l: i32, two_m_s: i32, two_j: u32, two_m: i32) -> f64 {
    if two_m_s.abs() != 1
        || m_l.unsigned_abs() > l
        || two_m != 2 * m_l + two_m_s
        || two_m.unsigned_abs() > two_j
    {
        return 0.0;
    }
    let tl1 = 2.0 * l as f64 + 1.0; // 2l + 1
    let plus = ((tl1 + two_m as f64) / (2.0 * tl1)).max(0.0).sqrt();
    let minus = ((tl1 - two_m as f64) / (2.0 * tl1)).max(0.0).sqrt();
    if two_j == 2 * l + 1 {
        if two_m_s > 0 {
            plus
        } else {
            minus
        }
    } else if l >= 1 && two_j == 2 * l - 1 {
        if two_m_s > 0 {
            -minus
        } else {
            plus
        }
    } else {
        0.0
    }
}

/// l = 2 orbital eigenstates of L_z in Fock form. The `m_l = +/-1, +/-2`
/// combinations carry the positive-phase relabeling
/// `|m_l = +/-1> = (|d_xz> +/- i |d_yz>)/sqrt2` (no Condon-Shortley sign),
/// which reproduces the spin-orbit coupled states with positive coefficients.
fn d_shell_terms(m_l: i32) -> Vec<(Complex64, [u32; 3])> {
    let i = Complex64::new(0.0, 1.0);
    match m_l {
        0 => orbital_terms(OrbitalLabel::ThreeDz2),
        1 => vec![
            (re(SQRT1_2), [1, 0, 1]),
            (i * SQRT1_2, [0, 1, 1]),
        ],
        -1 => vec![
            (re(SQRT1_2), [1, 0, 1]),
            (-i * SQRT1_2, [0, 1, 1]),
        ],
        2 => vec![
            (re(0.5), [2, 0, 0]),
            (re(-0.5), [0, 2, 0]),
            (i * SQRT1_2, [1, 1, 0]),
        ],
        -2 => vec![
            (re(0.5), [2, 0, 0]),
            (re(-0.5), [0, 2, 0]),
            (-i * SQRT1_2, [1, 1, 0]),
        ],
        _ => unreachable!("m_l out of the l = 2 shell"),
    }
}

/// Spin-orbit coupled eigenstate `|j, m>` of the d shell (`l = 2`), expanded
/// into Fock kets over a single electron. `two_j` is 5 or 3; `two_m` is odd
/// with `|two_m| <= two_j`.
pub fn build_jm_state(two_j: u32, two_m: i32) -> Result<StateVector> {
    if two_j != 5 && two_j != 3 {
        return Err(Error::OutOfRange {
            what: "j",
            detail: format!("two_j = {two_j}, expected 5 or 3 (j = 5/2 or 3/2)"),
        });
    }
    if two_m.rem_euclid(2) == 0 || two_m.unsigned_abs() > two_j {
        return Err(Error::OutOfRange {
            what: "m",
            detail: format!("two_m = {two_m} invalid for two_j = {two_j}"),
        });
    }
    let mut terms = Vec::new();
    for two_m_s in [1i32, -1] {
        let m_l = (two_m - two_m_s) / 2;
        if m_l.unsigned_abs() > 2 {
            continue;
        }
        let cg = clebsch_gordan_ls(2, m_l, two_m_s, two_j, two_m);
        if cg == 0.0 {
            continue;
        }
        let spin = if two_m_s > 0 { SpinState::Up } else { SpinState::Down };
        for (amp, fock) in d_shell_terms(m_l) {
            let mut entries = mode_ket(fock);
            entries.push(FactorState::Spin(spin));
            terms.push((amp * cg, ProductKet::new(entries)));
        }
    }
    StateVector::normalized(SystemSignature::electrons(1), terms)
}

fn permutations_with_sign(n: usize) -> Vec<(f64, Vec<usize>)> {
    // plain recursive expansion; n <= 4 so size is at most 24
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, sign: f64, out: &mut Vec<(f64, Vec<usize>)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((sign, prefix.clone()));
            return;
        }
        let pos = prefix.len();
        for v in 0..n {
            if used[v] {
                continue;
            }
            // count inversions added by placing v at `pos`
            let inversions = prefix.iter().filter(|&&p| p > v).count();
            used[v] = true;
            prefix.push(v);
            let s = if inversions % 2 == 0 { sign } else { -sign };
            rec(prefix, used, s, out);
            prefix.pop();
            used[v] = false;
        }
        let _ = pos;
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], 1.0, &mut out);
    out
}

/// Antisymmetrized product of single-electron spin-orbitals,
/// `(1/sqrt(N!)) sum_sigma sign(sigma) (x)_i orbital_{sigma(i)}`, normalized
/// afterwards so non-orthogonal orbitals are allowed. Linearly dependent
/// orbitals annihilate the sum and surface as [`Error::ZeroNorm`].
pub fn slater_determinant(spin_orbitals: &[StateVector]) -> Result<StateVector> {
    let n = spin_orbitals.len();
    if n == 0 || n > 4 {
        return Err(Error::OutOfRange {
            what: "orbital count",
            detail: format!("{n} not in 1..=4"),
        });
    }
    let single = SystemSignature::electrons(1);
    for orb in spin_orbitals {
        if orb.signature() != &single {
            return Err(Error::SignatureMismatch(
                "spin-orbitals must share the single-electron signature".into(),
            ));
        }
    }
    let prefactor = re(1.0 / (1..=n).product::<usize>() as f64);
    let mut terms: Vec<(Complex64, ProductKet)> = Vec::new();
    for (sign, perm) in permutations_with_sign(n) {
        // cross product of the chosen orbitals' terms, electron i gets
        // orbital perm[i]
        let mut partial: Vec<(Complex64, Vec<FactorState>)> =
            vec![(prefactor * sign, Vec::with_capacity(4 * n))];
        for &which in perm.iter() {
            let mut next = Vec::with_capacity(partial.len() * spin_orbitals[which].terms().len());
            for (amp, entries) in &partial {
                for (oamp, oket) in spin_orbitals[which].terms() {
                    let mut e = entries.clone();
                    e.extend_from_slice(oket.entries());
                    next.push((amp * oamp, e));
                }
            }
            partial = next;
        }
        terms.extend(
            partial
                .into_iter()
                .map(|(amp, entries)| (amp, ProductKet::new(entries))),
        );
    }
    StateVector::normalized(SystemSignature::electrons(n as u8), terms)
}

/// Helium state labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeliumState {
    Ground,
    Singlet1,
    TripletM1,
    TripletM0,
    TripletMm1,
}

impl FromStr for HeliumState {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground" => Ok(Self::Ground),
            "singlet1" => Ok(Self::Singlet1),
            "triplet_m1" => Ok(Self::TripletM1),
            "triplet_m0" => Ok(Self::TripletM0),
            "triplet_m-1" => Ok(Self::TripletMm1),
            other => Err(Error::UnknownLabel(other.into())),
        }
    }
}

/// Sum of products of single-electron states, then normalized.
fn combine(groups: Vec<(Complex64, Vec<StateVector>)>) -> Result<StateVector> {
    let mut terms: Vec<(Complex64, ProductKet)> = Vec::new();
    let mut electrons = 0u8;
    for (coeff, parts) in &groups {
        electrons = parts.len() as u8;
        let mut partial: Vec<(Complex64, Vec<FactorState>)> = vec![(*coeff, Vec::new())];
        for part in parts {
            let mut next = Vec::with_capacity(partial.len() * part.terms().len());
            for (amp, entries) in &partial {
                for (pamp, pket) in part.terms() {
                    let mut e = entries.clone();
                    e.extend_from_slice(pket.entries());
                    next.push((amp * pamp, e));
                }
            }
            partial = next;
        }
        terms.extend(
            partial
                .into_iter()
                .map(|(amp, entries)| (amp, ProductKet::new(entries))),
        );
    }
    StateVector::normalized(SystemSignature::electrons(electrons), terms)
}

/// The two-electron helium states: ground `|1S 1S> (x) singlet`, first
/// excited singlet `sym(1S,2S) (x) singlet`, and the three triplets
/// `antisym(1S,2S) (x) {|uu>, (|ud>+|du>)/sqrt2, |dd>}`.
pub fn build_helium(state: HeliumState) -> Result<StateVector> {
    use SpinState::{Down as Dn, Up};
    let orb = |label, spin| spin_orbital(label, spin);
    match state {
        HeliumState::Ground => slater_determinant(&[
            orb(OrbitalLabel::OneS, Up)?,
            orb(OrbitalLabel::OneS, Dn)?,
        ]),
        HeliumState::TripletM1 => slater_determinant(&[
            orb(OrbitalLabel::OneS, Up)?,
            orb(OrbitalLabel::TwoS, Up)?,
        ]),
        HeliumState::TripletMm1 => slater_determinant(&[
            orb(OrbitalLabel::OneS, Dn)?,
            orb(OrbitalLabel::TwoS, Dn)?,
        ]),
        HeliumState::Singlet1 => combine(vec![
            (re(0.5), vec![orb(OrbitalLabel::OneS, Up)?, orb(OrbitalLabel::TwoS, Dn)?]),
            (re(-0.5), vec![orb(OrbitalLabel::OneS, Dn)?, orb(OrbitalLabel::TwoS, Up)?]),
            (re(0.5), vec![orb(OrbitalLabel::TwoS, Up)?, orb(OrbitalLabel::OneS, Dn)?]),
            (re(-0.5), vec![orb(OrbitalLabel::TwoS, Dn)?, orb(OrbitalLabel::OneS, Up)?]),
        ]),
        HeliumState::TripletM0 => combine(vec![
            (re(0.5), vec![orb(OrbitalLabel::OneS, Up)?, orb(OrbitalLabel::TwoS, Dn)?]),
            (re(0.5), vec![orb(OrbitalLabel::OneS, Dn)?, orb(OrbitalLabel::TwoS, Up)?]),
            (re(-0.5), vec![orb(OrbitalLabel::TwoS, Up)?, orb(OrbitalLabel::OneS, Dn)?]),
            (re(-0.5), vec![orb(OrbitalLabel::TwoS, Dn)?, orb(OrbitalLabel::OneS, Up)?]),
        ]),
    }
}

/// Pi-bond variants of the pseudo-molecule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiBondKind {
    Single,
    Double,
}

impl FromStr for PiBondKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Self::Single),
            "double" => Ok(Self::Double),
            other => Err(Error::UnknownLabel(other.into())),
        }
    }
}

fn bonding_spin_orbital(separation: f64, spin: SpinState) -> Result<StateVector> {
    let xi = re(separation / std::f64::consts::SQRT_2);
    let lobe = |displacement: Complex64| {
        ProductKet::new(vec![
            FactorState::Mode(ModeEntry::displaced(displacement, 0)),
            FactorState::Mode(ModeEntry::fock(0)),
            FactorState::Mode(ModeEntry::fock(1)),
            FactorState::Spin(spin),
        ])
    };
    // normalization absorbs the non-orthogonal lobe overlap e^{-d^2}
    StateVector::normalized(
        SystemSignature::electrons(1),
        vec![(re(1.0), lobe(xi)), (re(1.0), lobe(-xi))],
    )
}

/// LCAO pi-bond: the bonding orbital is the symmetric combination of two
/// p_z lobes displaced along x by `xi = +/- d/sqrt2`. `single` puts one
/// spin-up electron in it; `double` fills it with a spin singlet, which
/// leaves the spatial density identical to the single bond.
pub fn build_pi_bond(kind: PiBondKind, separation: f64) -> Result<StateVector> {
    if !separation.is_finite() {
        return Err(Error::NonFinite { what: "separation", value: separation });
    }
    if separation <= 0.0 {
        return Err(Error::OutOfRange {
            what: "separation",
            detail: format!("{separation} <= 0 gives degenerate centers"),
        });
    }
    match kind {
        PiBondKind::Single => bonding_spin_orbital(separation, SpinState::Up),
        PiBondKind::Double => slater_determinant(&[
            bonding_spin_orbital(separation, SpinState::Up)?,
            bonding_spin_orbital(separation, SpinState::Down)?,
        ]),
    }
}
