use super::*;
use crate::kernels::PARITY_EIGENVALUES;
use crate::states::{
    build_helium, build_jm_state, build_pi_bond, build_reference_spin_state, spin_orbital,
    slater_determinant, HeliumState, OrbitalLabel, PiBondKind, ReferencePanel, SpinState,
};
use crate::quad::SpinRule;
use approx::assert_abs_diff_eq;
use std::f64::consts::{FRAC_PI_4, PI};

fn angle(t: f64, p: f64) -> SpinAngle {
    SpinAngle::new(t, p).unwrap()
}

fn equal_angle_plan(rho: &DensityOperator) -> ReductionPlan {
    let mut plan = ReductionPlan::trace_all(rho.signature());
    for i in rho.signature().spin_indices() {
        plan.set(i, Directive::EqualAngle(0));
    }
    plan
}

#[test]
fn singlet_equal_angle_is_constant() {
    let rho = build_reference_spin_state(ReferencePanel::E).unwrap().density();
    let plan = equal_angle_plan(&rho);
    for &(t, p) in &[(0.0, 0.0), (0.3, 1.1), (FRAC_PI_4, 2.0), (1.2, 0.4)] {
        let w = evaluate(&rho, &plan, &[angle(t, p)]).unwrap();
        assert_abs_diff_eq!(w.value, -0.5, epsilon = 1e-13);
        assert!(w.residual < 1e-13);
    }
}

#[test]
fn up_state_at_north_pole() {
    let rho = build_reference_spin_state(ReferencePanel::A).unwrap().density();
    let plan = equal_angle_plan(&rho);
    let w = evaluate(&rho, &plan, &[angle(0.0, 0.0)]).unwrap();
    assert_abs_diff_eq!(w.value, PARITY_EIGENVALUES.0, epsilon = 1e-14);
}

#[test]
fn triplet_m0_dense_anchor_values() {
    let rho = build_reference_spin_state(ReferencePanel::F).unwrap().density();
    let plan = equal_angle_plan(&rho);
    let w0 = evaluate(&rho, &plan, &[angle(0.0, 0.0)]).unwrap();
    assert_abs_diff_eq!(w0.value, -0.5, epsilon = 1e-13);
    let w1 = evaluate(&rho, &plan, &[angle(FRAC_PI_4, 0.0)]).unwrap();
    assert_abs_diff_eq!(w1.value, 1.0, epsilon = 1e-13);
}

#[test]
fn hydrogen_1s_wigner_peak() {
    let psi = spin_orbital(OrbitalLabel::OneS, SpinState::Up).unwrap();
    let rho = psi.density();
    let sig = rho.signature().clone();
    let mut plan = ReductionPlan::trace_all(&sig);
    for i in sig.mode_indices(0).unwrap() {
        plan.set(i, Directive::Fixed(PhasePoint::new(0.0, 0.0).unwrap()));
    }
    let w = evaluate(&rho, &plan, &[]).unwrap();
    assert_abs_diff_eq!(w.value, 1.0 / PI.powi(3), epsilon = 1e-14);
}

#[test]
fn position_density_anchors() {
    let rho = spin_orbital(OrbitalLabel::OneS, SpinState::Up).unwrap().density();
    let at_origin = position_density(&rho, 0, [0.0; 3]).unwrap();
    assert_abs_diff_eq!(at_origin, PI.powf(-1.5), epsilon = 1e-14);

    // d_z2 vanishes on the cone 2 z^2 = x^2 + y^2
    let dz2 = spin_orbital(OrbitalLabel::ThreeDz2, SpinState::Up).unwrap().density();
    let on_cone = position_density(&dz2, 0, [1.0, 1.0, 1.0]).unwrap();
    assert_abs_diff_eq!(on_cone, 0.0, epsilon = 1e-12);

    // helium: both electrons share the same density
    let he = build_helium(HeliumState::Ground).unwrap().density();
    let q = [0.4, -0.2, 0.9];
    let d0 = position_density(&he, 0, q).unwrap();
    let d1 = position_density(&he, 1, q).unwrap();
    let r2 = q.iter().map(|x| x * x).sum::<f64>();
    let expect = PI.powf(-1.5) * (-r2).exp();
    assert_abs_diff_eq!(d0, expect, epsilon = 1e-13);
    assert_abs_diff_eq!(d1, expect, epsilon = 1e-13);
}

#[test]
fn bloch_field_product_and_coupled_states() {
    let dz2 = spin_orbital(OrbitalLabel::ThreeDz2, SpinState::Up).unwrap().density();
    let s = bloch_field(&dz2, 0, 0, [0.7, -0.3, 1.1]).unwrap();
    assert!(!s.underflow);
    assert_abs_diff_eq!(s.vector[0], 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(s.vector[1], 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(s.vector[2], 1.0, epsilon = 1e-12);

    // |5/2,1/2> on the node cone of d_z2: only the down branch survives
    let jm = build_jm_state(5, 1).unwrap().density();
    let s = bloch_field(&jm, 0, 0, [1.0, 1.0, 1.0]).unwrap();
    assert!(!s.underflow);
    assert_abs_diff_eq!(s.vector[2], -1.0, epsilon = 1e-9);
    // on the z axis only the d_z2 (up) branch survives
    let s = bloch_field(&jm, 0, 0, [0.0, 0.0, 1.5]).unwrap();
    assert_abs_diff_eq!(s.vector[2], 1.0, epsilon = 1e-12);
}

#[test]
fn bloch_underflow_at_shared_node() {
    // every l = 2 orbital vanishes at the origin, so conditioning there
    // underflows rather than dividing zero by zero
    let jm = build_jm_state(5, 1).unwrap().density();
    let s = bloch_field(&jm, 0, 0, [0.0, 0.0, 0.0]).unwrap();
    assert!(s.underflow);
    assert_eq!(s.vector, [0.0; 3]);
    assert!(s.weight.abs() < BLOCH_UNDERFLOW);
}

#[test]
fn moment_rule_matches_bloch_field() {
    // sqrt(3) * int n W dmu / int W dmu reproduces the algebraic Bloch vector
    let jm = build_jm_state(5, 1).unwrap().density();
    let sig = jm.signature().clone();
    let q = [0.9, 0.2, 0.8];
    let mut plan = ReductionPlan::trace_all(&sig);
    plan.set_position_marginal(&sig, 0, q).unwrap();
    plan.set_equal_angle(&sig, 0, 0).unwrap();
    let section = SpinSection::contract(&jm, &plan).unwrap();

    let rule = SpinRule::new(32, 32);
    let mut num = [0.0f64; 3];
    let mut den = 0.0f64;
    for &(t, p, w) in &rule.nodes {
        let (s2t, c2t) = (2.0 * t).sin_cos();
        let (s2p, c2p) = (2.0 * p).sin_cos();
        let n = [-s2t * c2p, s2t * s2p, c2t];
        let value = section.wigner_at(&[angle(t, p)]).unwrap().value;
        den += w * value;
        for (acc, component) in num.iter_mut().zip(n) {
            *acc += w * component * value;
        }
    }
    let bloch = bloch_field(&jm, 0, 0, q).unwrap();
    for (moment, component) in num.iter().zip(bloch.vector) {
        assert_abs_diff_eq!(3.0f64.sqrt() * moment / den, component, epsilon = 1e-9);
    }
}

#[test]
fn jm_magnetization_anchors() {
    // <sigma_z> = 1/5 via the sqrt(3) first moment of the spin-only slice
    let jm = build_jm_state(5, 1).unwrap().density();
    let sig = jm.signature().clone();
    let mut plan = ReductionPlan::trace_all(&sig);
    plan.set_equal_angle(&sig, 0, 0).unwrap();
    let section = SpinSection::contract(&jm, &plan).unwrap();
    let rule = SpinRule::new(32, 32);
    let mut mz = 0.0;
    let mut total = 0.0;
    for &(t, p, w) in &rule.nodes {
        let v = section.wigner_at(&[angle(t, p)]).unwrap().value;
        mz += w * (2.0 * t).cos() * v;
        total += w * v;
    }
    assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(3.0f64.sqrt() * mz, 0.2, epsilon = 1e-12);
}

#[test]
fn entropy_anchors() {
    let jm = build_jm_state(5, 1).unwrap();
    let spin_factor = jm.signature().spin_index(0).unwrap();
    let s = entanglement_entropy(&jm, &[spin_factor]).unwrap();
    assert_abs_diff_eq!(s, 0.970_950_594_454_668_6, epsilon = 1e-12);

    let singlet = build_reference_spin_state(ReferencePanel::E).unwrap();
    assert_abs_diff_eq!(entanglement_entropy(&singlet, &[0]).unwrap(), 1.0, epsilon = 1e-12);

    let product = spin_orbital(OrbitalLabel::ThreeDz2, SpinState::Up).unwrap();
    let spin_factor = product.signature().spin_index(0).unwrap();
    assert_abs_diff_eq!(
        entanglement_entropy(&product, &[spin_factor]).unwrap(),
        0.0,
        epsilon = 1e-12
    );
}

#[test]
fn entropy_with_displaced_kets() {
    // pi-bond product state: spin factors carry no entanglement with space
    let single = build_pi_bond(PiBondKind::Single, 1.5).unwrap();
    let spin_factor = single.signature().spin_index(0).unwrap();
    let s = entanglement_entropy(&single, &[spin_factor]).unwrap();
    assert_abs_diff_eq!(s, 0.0, epsilon = 1e-10);

    // double bond: tracing one electron leaves exactly the spin singlet bit
    let double = build_pi_bond(PiBondKind::Double, 1.5).unwrap();
    let e0: Vec<usize> = (0..4).collect();
    let s = entanglement_entropy(&double, &e0).unwrap();
    assert_abs_diff_eq!(s, 1.0, epsilon = 1e-10);
}

#[test]
fn overlap_anchors() {
    let singlet = build_reference_spin_state(ReferencePanel::E).unwrap().density();
    let triplet = build_reference_spin_state(ReferencePanel::F).unwrap().density();
    assert_abs_diff_eq!(overlap(&singlet, &singlet).unwrap(), 1.0, epsilon = 1e-13);
    assert_abs_diff_eq!(overlap(&singlet, &triplet).unwrap(), 0.0, epsilon = 1e-13);

    let ground = build_helium(HeliumState::Ground).unwrap().density();
    let excited = build_helium(HeliumState::Singlet1).unwrap().density();
    assert_abs_diff_eq!(overlap(&ground, &excited).unwrap(), 0.0, epsilon = 1e-13);
    assert_abs_diff_eq!(overlap(&ground, &ground).unwrap(), 1.0, epsilon = 1e-13);
}

#[test]
fn permutation_symmetry_of_indistinguishable_electrons() {
    let he = build_helium(HeliumState::Singlet1).unwrap().density();
    let sig = he.signature().clone();
    let q = [0.5, -0.1, 1.2];

    let mut plan01 = ReductionPlan::trace_all(&sig);
    plan01.set_position_marginal(&sig, 0, q).unwrap();
    plan01.set_equal_angle(&sig, 0, 0).unwrap();
    plan01.set_equal_angle(&sig, 1, 0).unwrap();

    let mut plan10 = ReductionPlan::trace_all(&sig);
    plan10.set_position_marginal(&sig, 1, q).unwrap();
    plan10.set_equal_angle(&sig, 0, 0).unwrap();
    plan10.set_equal_angle(&sig, 1, 0).unwrap();

    for &(t, p) in &[(0.2, 0.3), (1.0, 2.5)] {
        let a = evaluate(&he, &plan01, &[angle(t, p)]).unwrap().value;
        let b = evaluate(&he, &plan10, &[angle(t, p)]).unwrap().value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }

    let li = slater_determinant(&[
        spin_orbital(OrbitalLabel::OneS, SpinState::Up).unwrap(),
        spin_orbital(OrbitalLabel::OneS, SpinState::Down).unwrap(),
        spin_orbital(OrbitalLabel::TwoS, SpinState::Up).unwrap(),
    ])
    .unwrap()
    .density();
    let sig = li.signature().clone();
    for e in 0..3u8 {
        let mut plan = ReductionPlan::trace_all(&sig);
        plan.set_position_marginal(&sig, e, q).unwrap();
        plan.set_equal_angle(&sig, e, 0).unwrap();
        let v = evaluate(&li, &plan, &[angle(0.4, 0.9)]).unwrap().value;
        if e == 0 {
            continue;
        }
        let mut plan0 = ReductionPlan::trace_all(&sig);
        plan0.set_position_marginal(&sig, 0, q).unwrap();
        plan0.set_equal_angle(&sig, 0, 0).unwrap();
        let v0 = evaluate(&li, &plan0, &[angle(0.4, 0.9)]).unwrap().value;
        assert_abs_diff_eq!(v, v0, epsilon = 1e-12);
    }
}

#[test]
fn plan_validation_rejects_mismatches() {
    let rho = build_reference_spin_state(ReferencePanel::A).unwrap().density();
    let bad = ReductionPlan::new(vec![Directive::Fixed(PhasePoint::new(0.0, 0.0).unwrap())]);
    assert!(evaluate(&rho, &bad, &[]).is_err());

    let short = ReductionPlan::new(vec![]);
    assert!(evaluate(&rho, &short, &[]).is_err());

    // missing angle for a declared group
    let plan = ReductionPlan::new(vec![Directive::EqualAngle(1)]);
    assert!(matches!(
        evaluate(&rho, &plan, &[angle(0.0, 0.0)]),
        Err(Error::MissingAngle(1))
    ));
}

#[test]
fn full_quadrature_normalization_of_builder_states() {
    // quadrature of W over every degree of freedom equals 1; factorized per
    // term pair (Gauss-Hermite over each mode's q and p, spin product rule)
    use crate::quad::GaussHermite;
    let gh = GaussHermite::new(40);
    let spin_rule = SpinRule::new(16, 16);

    let states = vec![
        build_reference_spin_state(ReferencePanel::H).unwrap(),
        spin_orbital(OrbitalLabel::ThreeDz2, SpinState::Up).unwrap(),
        build_jm_state(5, 1).unwrap(),
    ];
    for psi in states {
        let rho = psi.density();
        let sig = rho.signature().clone();
        let mut total = Complex64::ZERO;
        for (coeff, ket, bra) in rho.terms() {
            let mut factor_product = *coeff;
            for (i, f) in sig.factors().iter().enumerate() {
                match f {
                    Factor::Mode { .. } => {
                        let (mk, mb) = match (ket.entry(i), bra.entry(i)) {
                            (FactorState::Mode(a), FactorState::Mode(b)) => (a, b),
                            _ => unreachable!(),
                        };
                        let mut integral = Complex64::ZERO;
                        for (qn, qw) in gh.nodes() {
                            for (pn, pw) in gh.nodes() {
                                let w = mode_kernel(
                                    mk,
                                    mb,
                                    ModeDirective::Fixed(PhasePoint::new(qn, pn).unwrap()),
                                )
                                .unwrap();
                                integral += qw * pw * w * ((qn * qn + pn * pn).exp());
                            }
                        }
                        factor_product *= integral;
                    }
                    Factor::Spin { .. } => {
                        let (sk, sb) = match (ket.entry(i), bra.entry(i)) {
                            (FactorState::Spin(a), FactorState::Spin(b)) => (a, b),
                            _ => unreachable!(),
                        };
                        let mut integral = Complex64::ZERO;
                        for &(t, p, w) in &spin_rule.nodes {
                            integral += w * spin_kernel(angle(t, p)).element(sb.index(), sk.index());
                        }
                        factor_product *= integral;
                    }
                }
            }
            total += factor_product;
        }
        assert_abs_diff_eq!(total.re, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(total.im, 0.0, epsilon = 1e-8);
    }
}

#[test]
fn lithium_far_point_spins_condition_to_singlet_eigenvector() {
    let li = slater_determinant(&[
        spin_orbital(OrbitalLabel::OneS, SpinState::Up).unwrap(),
        spin_orbital(OrbitalLabel::OneS, SpinState::Down).unwrap(),
        spin_orbital(OrbitalLabel::TwoS, SpinState::Up).unwrap(),
    ])
    .unwrap()
    .density();
    let sig = li.signature().clone();
    let mut plan = ReductionPlan::trace_all(&sig);
    plan.set_position_marginal(&sig, 0, [0.0, 0.0, 3.0]).unwrap();
    plan.set_equal_angle(&sig, 1, 0).unwrap();
    plan.set_equal_angle(&sig, 2, 0).unwrap();
    let section = SpinSection::contract(&li, &plan).unwrap();

    // exact conditional weights: a = |1S|^2 appears four ways, 2S singlet
    // twice, giving fidelity (a + 2b) / (4a + 2b) = 76/79 at r = 3
    let inv = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let singlet4 = [Complex64::ZERO, -inv, inv, Complex64::ZERO];
    let fidelity = section.fidelity_with_pure(&singlet4).unwrap();
    assert_abs_diff_eq!(fidelity, 76.0 / 79.0, epsilon = 1e-12);
}
