use std::f64::consts::{PI, TAU};

use approx::assert_abs_diff_eq;
use nalgebra::Vector3;

use geogate::dynamics::{
    analyze_cyclic_evolution, berry_solid_angle, check_cyclicity, extract_phase_triple,
    propagate_bloch, propagate_spinor, solid_angle_of_path, BlochPath, EvolutionOptions,
    DEFAULT_STEPS,
};
use geogate::phase::angular_distance;
use geogate::segment::RotatingFieldSegment;
use geogate::spinor::SpinorState;
use geogate::Error;

fn seg(w0: f64, w1: f64, w: f64) -> RotatingFieldSegment {
    RotatingFieldSegment::new(w0, w1, w).unwrap()
}

#[test]
fn static_field_only_adds_zeeman_phase() {
    let s = seg(0.0, 2.0, 1.0);
    let traj = propagate_spinor(&s, &SpinorState::zero(), 512).unwrap();
    for (t, psi) in traj.times.iter().zip(&traj.states) {
        let expected = SpinorState::zero().amp0 * geogate::spinor::C64::from_polar(1.0, -t);
        assert!((psi.amp0 - expected).norm() < 1e-10);
        assert!(psi.amp1.norm() < 1e-12);
    }
}

#[test]
fn cyclic_state_returns_with_closed_form_phase() {
    let s = seg(1.0, 1.0, 2.0);
    assert!(
        check_cyclicity(&s, &s.cyclic_state().unwrap(), DEFAULT_STEPS)
            .unwrap()
            .cyclic
    );

    let s = seg(3.0, 4.0, 6.25);
    let traj = propagate_spinor(&s, &s.cyclic_state().unwrap(), DEFAULT_STEPS).unwrap();
    assert!(angular_distance(traj.overlap().arg(), -1.6 * PI) < 1e-6);
}

#[test]
fn bloch_paths_close_for_both_cyclic_states() {
    let s = seg(0.8, 2.5, 1.1);
    let chi = s.chi().unwrap();
    let n = Vector3::new(chi.sin(), 0.0, chi.cos());
    let plus = propagate_bloch(&s, &n, DEFAULT_STEPS).unwrap();
    let minus = propagate_bloch(&s, &-n, DEFAULT_STEPS).unwrap();
    assert!(plus.closure_gap() < 1e-6);
    assert!(minus.closure_gap() < 1e-6);
    for (a, b) in plus.points.iter().zip(&minus.points) {
        assert!((a + b).norm() < 1e-9);
    }

    let still = propagate_bloch(&seg(0.0, 1.0, 1.0), &Vector3::z(), 200).unwrap();
    assert!(still
        .points
        .iter()
        .all(|p| (p - Vector3::z()).norm() < 1e-12));
    assert!(matches!(
        propagate_bloch(&s, &Vector3::new(1.0, 1.0, 0.0), 200),
        Err(Error::NotUnitVector { .. })
    ));
}

#[test]
fn phase_triples_match_closed_forms() {
    let cases = [
        ((1.0, 1.0, 2.0), (-PI * (1.0 + 0.5f64.sqrt()), 0.0)),
        ((1.0, 2.0, 2.0), (-PI, -PI / 2.0)),
        ((0.0, 3.0, 1.0), (0.0, -3.0 * PI)),
    ];
    for ((w0, w1, w), (g, d)) in cases {
        let s = seg(w0, w1, w);
        let p = extract_phase_triple(&s, &s.cyclic_state().unwrap(), DEFAULT_STEPS).unwrap();
        assert_abs_diff_eq!(p.geometric, g, epsilon = 1e-6);
        assert_abs_diff_eq!(p.dynamic, d, epsilon = 1e-6);
        assert_abs_diff_eq!(p.total, g + d, epsilon = 1e-6);
    }
}

#[test]
fn non_cyclic_state_is_rejected() {
    let s = seg(1.0, 1.0, 2.0);
    let check = check_cyclicity(&s, &SpinorState::zero(), DEFAULT_STEPS).unwrap();
    assert!(!check.cyclic && check.defect > 1e-6);
    assert!(matches!(
        analyze_cyclic_evolution(&s, &SpinorState::zero(), &EvolutionOptions::default()),
        Err(Error::NonCyclic { .. })
    ));
    let pole = seg(0.0, 1.3, 0.4);
    assert!(
        check_cyclicity(&pole, &SpinorState::zero(), 256)
            .unwrap()
            .cyclic
    );
}

#[test]
fn solid_angle_of_latitude_circles_and_field_paths() {
    for theta in [0.3, PI / 2.0, 2.5] {
        let n = 2000;
        let times: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        let points = times
            .iter()
            .map(|t| {
                let phi = TAU * t;
                Vector3::new(
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                )
            })
            .collect();
        let path = BlochPath::from_samples(times, points).unwrap();
        assert_abs_diff_eq!(
            solid_angle_of_path(&path).unwrap(),
            -PI * (1.0 - theta.cos()),
            epsilon = 1e-8
        );
    }

    let s = seg(3.0, 4.0, 6.25);
    let path = propagate_spinor(&s, &s.cyclic_state().unwrap(), DEFAULT_STEPS)
        .unwrap()
        .bloch_path();
    assert_abs_diff_eq!(
        solid_angle_of_path(&path).unwrap(),
        -1.6 * PI,
        epsilon = 1e-7
    );
}

#[test]
fn berry_phase_is_the_adiabatic_limit() {
    assert_abs_diff_eq!(
        berry_solid_angle(&seg(1.0, 0.0, 1.0)).unwrap(),
        TAU,
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        berry_solid_angle(&seg(0.0, 1.0, 1.0)).unwrap(),
        0.0,
        epsilon = 1e-12
    );
    assert!(berry_solid_angle(&seg(0.0, 0.0, 1.0)).is_err());

    // At finite ω the AA phase exceeds Berry's by ≈ πωω₀²/Ω³ (≈1.1e-3 at
    // ω = 1e-3); integration tracks the exact value.
    let s = seg(1.0, 1.0, 0.001);
    let solid = berry_solid_angle(&s).unwrap();
    assert_abs_diff_eq!(solid, TAU * (1.0 - 0.5f64.sqrt()), epsilon = 1e-9);
    let p = extract_phase_triple(&s, &s.cyclic_state().unwrap(), 1 << 16).unwrap();
    let big = 1f64.hypot(1.0 - s.omega);
    assert_abs_diff_eq!(
        p.geometric,
        -PI * (1.0 - (1.0 - s.omega) / big),
        epsilon = 1e-6
    );
    let correction = PI * s.omega / 2f64.powf(1.5);
    assert_abs_diff_eq!(p.geometric + solid / 2.0, -correction, epsilon = 1e-5);

    let slower = seg(1.0, 1.0, 1e-4);
    let p = extract_phase_triple(&slower, &slower.cyclic_state().unwrap(), 1 << 17).unwrap();
    assert!((p.geometric + solid / 2.0).abs() < 1e-3, "{p:?}");
}
