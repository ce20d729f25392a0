use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;

use geogate::dynamics::{analyze_cyclic_evolution, EvolutionOptions};
use geogate::formulas::{conditional_phases, TwoQubitParams};
use geogate::gates::{
    basis_state, build_controlled_gate, build_single_qubit_gate, build_two_qubit_diag,
    compose_cnot, gate_adjoint, noncommutable, remove_control_one_phase, rotate_field_axis,
    GateMatrix,
};
use geogate::segment::{ControlState, RotatingFieldSegment};
use geogate::spinor::C64;

const O: C64 = C64::new(0.0, 0.0);
const L: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

fn diag(entries: &[C64]) -> GateMatrix {
    GateMatrix::from_matrix(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(
        entries,
    )))
    .unwrap()
}

fn explicit(chi: f64, gamma: f64) -> DMatrix<C64> {
    let (c, s) = (gamma.cos(), gamma.sin());
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(c, s * chi.cos()),
            C64::new(0.0, s * chi.sin()),
            C64::new(0.0, s * chi.sin()),
            C64::new(c, -s * chi.cos()),
        ],
    )
}

#[test]
fn single_qubit_gate_examples() {
    for (chi, gamma) in [(0.0, 0.7), (FRAC_PI_2, FRAC_PI_2), (1.1, -2.3), (2.0, 0.0)] {
        let u = build_single_qubit_gate(chi, gamma);
        assert!((u.matrix() - explicit(chi, gamma)).norm() < 1e-14);
    }
    let flip = build_single_qubit_gate(0.0, 0.7);
    assert!(flip.approx_eq(
        &diag(&[C64::from_polar(1.0, 0.7), C64::from_polar(1.0, -0.7)]),
        1e-14
    ));
    let not = build_single_qubit_gate(FRAC_PI_2, FRAC_PI_2);
    assert!((not.matrix() - DMatrix::from_row_slice(2, 2, &[O, I, I, O])).norm() < 1e-15);
    assert!(build_single_qubit_gate(0.4, 0.0).approx_eq(&GateMatrix::identity(2), 1e-15));
}

#[test]
fn adjoint_examples() {
    let u = build_single_qubit_gate(FRAC_PI_4, FRAC_PI_2);
    let inv = gate_adjoint(FRAC_PI_4, FRAC_PI_2);
    assert!(u.compose(&inv).approx_eq(&GateMatrix::identity(2), 1e-14));
    let half_turn = build_single_qubit_gate(0.9, PI);
    assert!(half_turn.approx_eq(&gate_adjoint(0.9, PI), 1e-14));
    assert!(half_turn.approx_eq(&diag(&[-L, -L]), 1e-14));
}

#[test]
fn noncommutability_examples() {
    assert!(noncommutable(0.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2));
    assert!(!noncommutable(0.3, PI, 1.2, 0.8));
    assert!(!noncommutable(0.7, 0.4, 0.7, 1.9));
}

#[test]
fn two_qubit_diag_and_controlled_phase() {
    let g = build_two_qubit_diag(0.0, 0.0, FRAC_PI_2, 0.0);
    assert!(g.nontrivial);
    assert!(g.gate.approx_eq(&diag(&[L, L, I, -I]), 1e-15));
    let cphase = remove_control_one_phase(&g.gate, FRAC_PI_2).unwrap();
    assert!(cphase.approx_eq(&diag(&[L, L, L, -L]), 1e-15));

    assert!(!build_two_qubit_diag(0.8, 0.3, 0.8, 0.3).nontrivial);

    let params = |delta| TwoQubitParams {
        omega0: 3f64.sqrt(),
        omega1: 2.0,
        omega: 4.0,
        j: 1.0,
        delta,
    };
    let chi_of = |delta| params(delta).effective_segment().unwrap().chi().unwrap();
    let g0 = conditional_phases(&params(ControlState::Zero))
        .unwrap()
        .total;
    let g1 = conditional_phases(&params(ControlState::One))
        .unwrap()
        .total;
    let (c0, c1) = (chi_of(ControlState::Zero), chi_of(ControlState::One));
    let built = build_two_qubit_diag(g0, c0, g1, c1);
    assert!(built.nontrivial);
    let m = built.gate.matrix();
    let blocks = [(0, explicit(c0, g0)), (2, explicit(c1, g1))];
    for (offset, block) in blocks {
        assert!((m.view((offset, offset), (2, 2)) - block).norm() < 1e-14);
    }
    assert!(m.view((0, 2), (2, 2)).norm() == 0.0 && m.view((2, 0), (2, 2)).norm() == 0.0);
}

#[test]
fn controlled_gate_examples() {
    let cn = build_controlled_gate(FRAC_PI_2, FRAC_PI_2);
    #[rustfmt::skip]
    let expected = DMatrix::from_row_slice(4, 4, &[
        L, O, O, O,
        O, L, O, O,
        O, O, O, I,
        O, O, I, O,
    ]);
    assert!((cn.matrix() - &expected).norm() < 1e-15);
    assert!(build_controlled_gate(0.0, 1.3).approx_eq(&GateMatrix::identity(4), 1e-15));
    assert!(build_controlled_gate(FRAC_PI_2, 0.0).approx_eq(&diag(&[L, L, I, -I]), 1e-15));

    let cnot = compose_cnot();
    assert!((cnot.matrix() - &expected).norm() < 1e-12);
    let out = cnot.apply(&basis_state(1, 0));
    assert!((out - basis_state(1, 1) * I).norm() < 1e-12);
    assert!((cnot.apply(&basis_state(0, 0)) - basis_state(0, 0)).norm() < 1e-12);
}

#[test]
fn field_axis_rotation_examples() {
    let s = RotatingFieldSegment::new(1.0, 1.0, 2.0).unwrap();
    let chi = s.chi().unwrap();
    assert_eq!(rotate_field_axis(&s, chi).unwrap().axis_tilt, 0.0);

    let options = EvolutionOptions::default();
    let base = analyze_cyclic_evolution(&s, &s.cyclic_state().unwrap(), &options).unwrap();
    for target in [FRAC_PI_2, 0.0] {
        let turned = rotate_field_axis(&s, target).unwrap();
        assert!((turned.chi().unwrap() - target).abs() < 1e-12);
        let evo =
            analyze_cyclic_evolution(&turned, &turned.cyclic_state().unwrap(), &options).unwrap();
        assert!(evo.phases.max_abs_diff(&base.phases) < 1e-6);
        let expected = -PI * (1.0 + 0.5f64.sqrt());
        assert!((evo.phases.geometric - expected).abs() < 1e-6);
        // The cyclic pair now sits at `target`: U₂-type at π/2, phase flip at 0.
        let u = geogate::dynamics::evolution_operator(&turned, 4096).unwrap();
        let built = build_single_qubit_gate(target, evo.overlap_phase);
        assert!(GateMatrix::from_matrix2(&u).unwrap().max_abs_diff(&built) < 1e-6);
    }
}
