//! Numerical propagation of spinors and Bloch vectors under a rotating field,
//! and extraction of total, dynamic and geometric phases from the trajectory.
//!
//! These routines never use the closed-form phase expressions; they are the
//! independent check for everything in [`crate::formulas`].

use std::f64::consts::PI;

use nalgebra::{Matrix2, Rotation3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::phase::{reduce_mod_2pi, PhaseTriple};
use crate::quadrature::{derivative_uniform, integrate_uniform, uniform_spacing};
use crate::segment::RotatingFieldSegment;
use crate::spinor::{su2_exp, SpinorState, C64};

/// Default number of integration steps per cycle.
pub const DEFAULT_STEPS: usize = 4096;
/// Smallest accepted step count.
pub const MIN_STEPS: usize = 100;
/// Default bound on `1 - |⟨ψ(0)|ψ(τ)⟩|` for a cyclic evolution.
pub const DEFAULT_CYCLICITY_TOLERANCE: f64 = 1e-6;
/// Largest end-point gap for a Bloch path to count as closed.
pub const PATH_CLOSURE_TOLERANCE: f64 = 1e-6;

const UNIT_TOLERANCE: f64 = 1e-9;
const POLE_GUARD: f64 = 1e-6;

/// Fixed-step time integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    /// Classical fourth-order Runge–Kutta.
    Rk4,
    /// Fourth-order Magnus expansion on two Gauss–Legendre nodes; every step
    /// is an exact SU(2) (or SO(3)) exponential, so the norm is conserved to
    /// rounding.
    #[default]
    Magnus4,
}

/// Gauss–Legendre nodes and the fourth-order Magnus generator for one step:
/// `Θ = h/2 (ω⃗₁ + ω⃗₂) + √3 h²/12 (ω⃗₂ × ω⃗₁)`.
fn magnus_generator(segment: &RotatingFieldSegment, t: f64, h: f64) -> Vector3<f64> {
    let offset = h * 3f64.sqrt() / 6.0;
    let w1 = segment.field(t + 0.5 * h - offset);
    let w2 = segment.field(t + 0.5 * h + offset);
    (w1 + w2) * (0.5 * h) + w2.cross(&w1) * (3f64.sqrt() / 12.0 * h * h)
}

pub(crate) fn check_steps(steps: usize) -> Result<()> {
    if steps < MIN_STEPS {
        return Err(Error::TooFewSteps {
            steps,
            min: MIN_STEPS,
        });
    }
    Ok(())
}

/// Spinor states sampled on a uniform time grid over one segment.
#[derive(Debug, Clone)]
pub struct SpinorTrajectory {
    pub segment: RotatingFieldSegment,
    pub times: Vec<f64>,
    pub states: Vec<SpinorState>,
}

impl SpinorTrajectory {
    pub fn initial(&self) -> &SpinorState {
        &self.states[0]
    }

    pub fn final_state(&self) -> &SpinorState {
        self.states.last().expect("trajectory is never empty")
    }

    /// `⟨ψ(0)|ψ(τ)⟩`.
    pub fn overlap(&self) -> C64 {
        self.initial().inner(self.final_state())
    }

    /// `⟨ψ(t)|H(t)|ψ(t)⟩` at every sample.
    pub fn energies(&self) -> Vec<f64> {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, s)| self.segment.energy(t, s))
            .collect()
    }

    /// `-∫⟨ψ|H|ψ⟩dt` over the trajectory.
    pub fn dynamic_phase(&self) -> f64 {
        let h = self.times[1] - self.times[0];
        -integrate_uniform(&self.energies(), h)
    }

    pub fn bloch_path(&self) -> BlochPath {
        let points = self.states.iter().map(SpinorState::bloch_vector).collect();
        BlochPath::from_samples_unchecked(self.times.clone(), points)
    }
}

/// Propagates `initial` over the segment with the default integrator.
pub fn propagate_spinor(
    segment: &RotatingFieldSegment,
    initial: &SpinorState,
    steps: usize,
) -> Result<SpinorTrajectory> {
    propagate_spinor_with(Integrator::default(), segment, initial, steps)
}

pub fn propagate_spinor_with(
    integrator: Integrator,
    segment: &RotatingFieldSegment,
    initial: &SpinorState,
    steps: usize,
) -> Result<SpinorTrajectory> {
    segment.validate()?;
    check_steps(steps)?;
    SpinorState::new(initial.amp0, initial.amp1)?;

    let h = segment.duration / steps as f64;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut psi = initial.as_vector();
    times.push(0.0);
    states.push(*initial);

    let minus_i = C64::new(0.0, -1.0);
    let rhs = |t: f64, v: &Vector2<C64>| -> Vector2<C64> { segment.hamiltonian(t) * v * minus_i };

    for k in 0..steps {
        let t = k as f64 * h;
        psi = match integrator {
            Integrator::Magnus4 => su2_exp(&magnus_generator(segment, t, h)) * psi,
            Integrator::Rk4 => {
                let hc = C64::new(h, 0.0);
                let half = C64::new(0.5 * h, 0.0);
                let k1 = rhs(t, &psi);
                let k2 = rhs(t + 0.5 * h, &(psi + k1 * half));
                let k3 = rhs(t + 0.5 * h, &(psi + k2 * half));
                let k4 = rhs(t + h, &(psi + k3 * hc));
                psi + (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4)
                    * C64::new(h / 6.0, 0.0)
            }
        };
        times.push((k + 1) as f64 * h);
        states.push(SpinorState::from_vector_unchecked(&psi));
    }
    Ok(SpinorTrajectory {
        segment: *segment,
        times,
        states,
    })
}

/// One-cycle evolution operator `U(τ)`, assembled column by column from the
/// propagated basis states.
pub fn evolution_operator(segment: &RotatingFieldSegment, steps: usize) -> Result<Matrix2<C64>> {
    let col0 = propagate_spinor(segment, &SpinorState::zero(), steps)?;
    let col1 = propagate_spinor(segment, &SpinorState::one(), steps)?;
    let a = col0.final_state();
    let b = col1.final_state();
    Ok(Matrix2::new(a.amp0, b.amp0, a.amp1, b.amp1))
}

/// Integrates `ṅ = ω⃗(t) × n` with the default integrator.
pub fn propagate_bloch(
    segment: &RotatingFieldSegment,
    initial: &Vector3<f64>,
    steps: usize,
) -> Result<BlochPath> {
    propagate_bloch_with(Integrator::default(), segment, initial, steps)
}

pub fn propagate_bloch_with(
    integrator: Integrator,
    segment: &RotatingFieldSegment,
    initial: &Vector3<f64>,
    steps: usize,
) -> Result<BlochPath> {
    segment.validate()?;
    check_steps(steps)?;
    let norm = initial.norm();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NotUnitVector { norm });
    }

    let h = segment.duration / steps as f64;
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    let mut n = *initial;
    times.push(0.0);
    points.push(n);
    let rhs = |t: f64, v: &Vector3<f64>| segment.field(t).cross(v);
    for k in 0..steps {
        let t = k as f64 * h;
        n = match integrator {
            Integrator::Magnus4 => Rotation3::from_scaled_axis(magnus_generator(segment, t, h)) * n,
            Integrator::Rk4 => {
                let k1 = rhs(t, &n);
                let k2 = rhs(t + 0.5 * h, &(n + k1 * (0.5 * h)));
                let k3 = rhs(t + 0.5 * h, &(n + k2 * (0.5 * h)));
                let k4 = rhs(t + h, &(n + k3 * h));
                n + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
            }
        };
        times.push((k + 1) as f64 * h);
        points.push(n);
    }
    Ok(BlochPath::from_samples_unchecked(times, points))
}

/// A sampled curve on the Bloch sphere with its polar and (unwrapped)
/// azimuthal tracks.
#[derive(Debug, Clone)]
pub struct BlochPath {
    pub times: Vec<f64>,
    pub points: Vec<Vector3<f64>>,
    pub theta: Vec<f64>,
    /// Azimuth with 2π jumps removed; exact pole samples repeat the previous
    /// azimuth.
    pub phi: Vec<f64>,
}

impl BlochPath {
    /// Builds a path from time-ordered unit vectors.
    pub fn from_samples(times: Vec<f64>, points: Vec<Vector3<f64>>) -> Result<Self> {
        if times.len() != points.len() || times.len() < 2 {
            return Err(Error::InvalidParameter(
                "a path needs at least two samples with matching times".into(),
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("sample times must increase".into()));
        }
        if let Some(p) = points
            .iter()
            .find(|p| (p.norm() - 1.0).abs() > UNIT_TOLERANCE)
        {
            return Err(Error::NotUnitVector { norm: p.norm() });
        }
        Ok(Self::from_samples_unchecked(times, points))
    }

    pub(crate) fn from_samples_unchecked(times: Vec<f64>, points: Vec<Vector3<f64>>) -> Self {
        let theta = points.iter().map(|p| p.z.clamp(-1.0, 1.0).acos()).collect();
        let mut phi = Vec::with_capacity(points.len());
        let mut previous: Option<f64> = None;
        for p in &points {
            let next = if p.x == 0.0 && p.y == 0.0 {
                previous.unwrap_or(0.0)
            } else {
                let raw = p.y.atan2(p.x);
                match previous {
                    Some(prev) => prev + reduce_mod_2pi(raw - prev),
                    None => raw,
                }
            };
            phi.push(next);
            previous = Some(next);
        }
        Self {
            times,
            points,
            theta,
            phi,
        }
    }

    /// The same path seen from a rotated reference frame, `n → R n`.
    pub fn rotated(&self, rotation: &Rotation3<f64>) -> Self {
        let points = self.points.iter().map(|p| rotation * p).collect();
        Self::from_samples_unchecked(self.times.clone(), points)
    }

    pub fn closure_gap(&self) -> f64 {
        (self.points[self.points.len() - 1] - self.points[0]).norm()
    }

    pub fn is_closed(&self, tolerance: f64) -> bool {
        self.closure_gap() <= tolerance
    }

    /// Net azimuthal winding `φ(end) - φ(start)`.
    pub fn azimuth_change(&self) -> f64 {
        self.phi[self.phi.len() - 1] - self.phi[0]
    }

    /// `∮ (1 - cos θ) dφ`, the solid angle swept relative to the north pole.
    fn north_pole_area(&self) -> f64 {
        let Some(h) = uniform_spacing(&self.times).filter(|_| self.points.len() >= 5) else {
            return self.north_pole_area_trapezoid();
        };
        // (1 - cos θ) φ̇ = (x ẏ - y ẋ) / (1 + z), regular away from the south pole.
        let xs: Vec<f64> = self.points.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = self.points.iter().map(|p| p.y).collect();
        let dx = derivative_uniform(&xs, h);
        let dy = derivative_uniform(&ys, h);
        let integrand: Vec<f64> = self
            .points
            .iter()
            .zip(dx.iter().zip(&dy))
            .map(|(p, (dx, dy))| {
                let denom = 1.0 + p.z;
                if denom <= 0.0 {
                    0.0
                } else {
                    (p.x * dy - p.y * dx) / denom
                }
            })
            .collect();
        integrate_uniform(&integrand, h)
    }

    fn north_pole_area_trapezoid(&self) -> f64 {
        self.theta
            .windows(2)
            .zip(self.phi.windows(2))
            .map(|(th, ph)| 0.5 * ((1.0 - th[0].cos()) + (1.0 - th[1].cos())) * (ph[1] - ph[0]))
            .sum()
    }
}

/// Geometric (Aharonov–Anandan) phase of a closed Bloch path,
/// `-½ ∮ (1 - cos θ) dφ`, winding-resolved.
///
/// Exact north-pole samples contribute nothing. A path that touches the
/// south pole (but not the north pole) is integrated in the frame flipped by
/// π about x̂, where `∮(1 - cos θ)dφ = 2Δφ + ∮(1 - cos θ')dφ'`.
pub fn solid_angle_of_path(path: &BlochPath) -> Result<f64> {
    let gap = path.closure_gap();
    if gap > PATH_CLOSURE_TOLERANCE {
        return Err(Error::OpenPath { gap });
    }
    let min_south = path
        .points
        .iter()
        .map(|p| 1.0 + p.z)
        .fold(f64::INFINITY, f64::min);
    let min_north = path
        .points
        .iter()
        .map(|p| 1.0 - p.z)
        .fold(f64::INFINITY, f64::min);
    let area = if min_south < POLE_GUARD && min_north >= POLE_GUARD {
        let flip = Rotation3::from_axis_angle(&Vector3::x_axis(), PI);
        let winding = (path.azimuth_change() / (2.0 * PI)).round();
        4.0 * PI * winding + path.rotated(&flip).north_pole_area()
    } else {
        path.north_pole_area()
    };
    Ok(-0.5 * area)
}

/// Result of a cyclicity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclicityCheck {
    pub cyclic: bool,
    /// `1 - |⟨ψ(0)|ψ(τ)⟩|`.
    pub defect: f64,
}

pub fn check_cyclicity(
    segment: &RotatingFieldSegment,
    initial: &SpinorState,
    steps: usize,
) -> Result<CyclicityCheck> {
    check_cyclicity_with_tolerance(segment, initial, steps, DEFAULT_CYCLICITY_TOLERANCE)
}

pub fn check_cyclicity_with_tolerance(
    segment: &RotatingFieldSegment,
    initial: &SpinorState,
    steps: usize,
    tolerance: f64,
) -> Result<CyclicityCheck> {
    let trajectory = propagate_spinor(segment, initial, steps)?;
    Ok(cyclicity_of(&trajectory, tolerance))
}

fn cyclicity_of(trajectory: &SpinorTrajectory, tolerance: f64) -> CyclicityCheck {
    let defect = 1.0 - trajectory.overlap().norm();
    CyclicityCheck {
        cyclic: defect < tolerance,
        defect,
    }
}

/// Everything measured on one cyclic evolution.
#[derive(Debug, Clone)]
pub struct CyclicEvolution {
    pub phases: PhaseTriple,
    /// `arg⟨ψ(0)|ψ(τ)⟩` in `(-π, π]`.
    pub overlap_phase: f64,
    pub defect: f64,
    pub trajectory: SpinorTrajectory,
}

impl CyclicEvolution {
    /// Distance on the circle between the summed phase and the overlap
    /// argument.
    pub fn total_phase_mismatch(&self) -> f64 {
        crate::phase::angular_distance(self.phases.total, self.overlap_phase)
    }
}

/// Options for [`analyze_cyclic_evolution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionOptions {
    pub steps: usize,
    pub integrator: Integrator,
    pub cyclicity_tolerance: f64,
}

impl Default for EvolutionOptions {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            integrator: Integrator::default(),
            cyclicity_tolerance: DEFAULT_CYCLICITY_TOLERANCE,
        }
    }
}

impl EvolutionOptions {
    pub fn with_steps(steps: usize) -> Self {
        Self {
            steps,
            ..Self::default()
        }
    }
}

/// Propagates a cyclic initial state and measures its phases.
///
/// The dynamic phase is Simpson quadrature of `-⟨ψ|H|ψ⟩`. The geometric
/// phase is the solid-angle integral of the Bloch path expressed in the
/// segment's own frame (tilt removed), so the winding is counted about the
/// field's symmetry axis.
pub fn analyze_cyclic_evolution(
    segment: &RotatingFieldSegment,
    initial: &SpinorState,
    options: &EvolutionOptions,
) -> Result<CyclicEvolution> {
    let trajectory = propagate_spinor_with(options.integrator, segment, initial, options.steps)?;
    let check = cyclicity_of(&trajectory, options.cyclicity_tolerance);
    if !check.cyclic {
        return Err(Error::NonCyclic {
            defect: check.defect,
            tolerance: options.cyclicity_tolerance,
        });
    }
    let body_path = trajectory
        .bloch_path()
        .rotated(&segment.tilt_rotation().inverse());
    let geometric = solid_angle_of_path(&body_path)?;
    let dynamic = trajectory.dynamic_phase();
    Ok(CyclicEvolution {
        phases: PhaseTriple::from_parts(dynamic, geometric),
        overlap_phase: trajectory.overlap().arg(),
        defect: check.defect,
        trajectory,
    })
}

/// Phases of a cyclic evolution with default integrator and tolerance.
pub fn extract_phase_triple(
    segment: &RotatingFieldSegment,
    initial: &SpinorState,
    steps: usize,
) -> Result<PhaseTriple> {
    analyze_cyclic_evolution(segment, initial, &EvolutionOptions::with_steps(steps))
        .map(|e| e.phases)
}

/// Solid angle `Ω_s` subtended at `B = 0` by the field direction over one
/// cycle, by quadrature of `(B_x Ḃ_y - B_y Ḃ_x) / (|B|(B_z + |B|))` in the
/// segment's own frame.
pub fn berry_solid_angle(segment: &RotatingFieldSegment) -> Result<f64> {
    segment.validate()?;
    if segment.omega0 == 0.0 && segment.omega1 == 0.0 {
        return Err(Error::Degenerate("field vanishes (ω₀ = ω₁ = 0)".into()));
    }
    if segment.omega0 == 0.0 {
        // Stationary field direction.
        return Ok(0.0);
    }
    let samples = DEFAULT_STEPS;
    let period = segment.period();
    let h = period / samples as f64;
    let sign = if segment.reversed { -1.0 } else { 1.0 };
    let integrand: Vec<f64> = (0..=samples)
        .map(|k| {
            let t = k as f64 * h;
            let b = segment.body_field(t);
            let (s, c) = (segment.omega * t).sin_cos();
            let db = Vector3::new(-s, c, 0.0) * (sign * segment.omega0 * segment.omega);
            let norm = b.norm();
            (b.x * db.y - b.y * db.x) / (norm * (b.z + norm))
        })
        .collect();
    Ok(integrate_uniform(&integrand, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::TAU;

    fn seg(w0: f64, w1: f64, w: f64) -> RotatingFieldSegment {
        RotatingFieldSegment::new(w0, w1, w).unwrap()
    }

    #[test]
    fn static_field_keeps_ground_state_with_phase() {
        let s = seg(0.0, 2.0, 1.0);
        let traj = propagate_spinor(&s, &SpinorState::zero(), 1000).unwrap();
        for (t, psi) in traj.times.iter().zip(&traj.states) {
            let expected = C64::from_polar(1.0, -t);
            assert!((psi.amp0 - expected).norm() < 1e-12);
            assert!(psi.amp1.norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = seg(1.0, 1.0, 1.0);
        let bad = SpinorState {
            amp0: C64::new(1.0, 0.0),
            amp1: C64::new(1.0, 0.0),
        };
        assert!(matches!(
            propagate_spinor(&s, &bad, 200),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            propagate_spinor(&s, &SpinorState::zero(), 99),
            Err(Error::TooFewSteps { .. })
        ));
        assert!(matches!(
            propagate_bloch(&s, &Vector3::new(0.0, 0.0, 2.0), 200),
            Err(Error::NotUnitVector { .. })
        ));
    }

    #[test]
    fn cyclic_state_closes_and_overlap_phase_matches() {
        // ω₀ = 3, ω₁ = 4, ω = 6.25: overlap phase ≡ -1.6π.
        let s = seg(3.0, 4.0, 6.25);
        let psi = s.cyclic_state().unwrap();
        let traj = propagate_spinor(&s, &psi, DEFAULT_STEPS).unwrap();
        assert!(1.0 - traj.overlap().norm() < 1e-12);
        let expected = reduce_mod_2pi(-1.6 * PI);
        assert_abs_diff_eq!(
            reduce_mod_2pi(traj.overlap().arg() - expected),
            0.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn bloch_cyclic_and_antipodal_paths_close() {
        let s = seg(1.0, 1.0, 2.0);
        let chi = s.body_chi().unwrap();
        let n = Vector3::new(chi.sin(), 0.0, chi.cos());
        let plus = propagate_bloch(&s, &n, DEFAULT_STEPS).unwrap();
        let minus = propagate_bloch(&s, &(-n), DEFAULT_STEPS).unwrap();
        assert!(plus.closure_gap() < 1e-6);
        assert!(minus.closure_gap() < 1e-6);
        for (a, b) in plus.points.iter().zip(&minus.points) {
            assert!((a + b).norm() < 1e-12);
        }
    }

    #[test]
    fn aligned_bloch_vector_is_stationary() {
        let s = seg(0.0, 1.5, 1.0);
        let path = propagate_bloch(&s, &Vector3::z(), 500).unwrap();
        assert!(path
            .points
            .iter()
            .all(|p| (p - Vector3::z()).norm() < 1e-14));
    }

    #[test]
    fn latitude_circles() {
        for &theta in &[0.3, PI / 2.0, 2.5] {
            let n = 2048;
            let times: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
            let points: Vec<Vector3<f64>> = times
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
            let gamma = solid_angle_of_path(&path).unwrap();
            assert_abs_diff_eq!(gamma, -PI * (1.0 - theta.cos()), epsilon = 1e-10);
            assert_abs_diff_eq!(path.azimuth_change(), TAU, epsilon = 1e-12);
        }
    }

    #[test]
    fn open_path_is_rejected() {
        let times = vec![0.0, 1.0];
        let points = vec![Vector3::z(), Vector3::x()];
        let path = BlochPath::from_samples(times, points).unwrap();
        assert!(matches!(
            solid_angle_of_path(&path),
            Err(Error::OpenPath { .. })
        ));
    }

    #[test]
    fn stationary_poles_have_zero_area() {
        for (w1, w) in [(3.0, 1.0), (1.0, 3.0)] {
            let s = seg(0.0, w1, w);
            for state in [SpinorState::zero(), SpinorState::one()] {
                let path = propagate_spinor(&s, &state, 256).unwrap().bloch_path();
                assert_eq!(solid_angle_of_path(&path).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn pole_hugging_south_path_uses_flipped_frame() {
        // Small circle around the south pole: -π(1 - cos θ) with θ near π.
        let theta = PI - 1e-4;
        let n = 1024;
        let times: Vec<f64> = (0..=n).map(|k| k as f64).collect();
        let points: Vec<Vector3<f64>> = times
            .iter()
            .map(|k| {
                let phi = TAU * k / n as f64;
                Vector3::new(
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                )
            })
            .collect();
        let path = BlochPath::from_samples(times, points).unwrap();
        let gamma = solid_angle_of_path(&path).unwrap();
        assert_abs_diff_eq!(gamma, -PI * (1.0 - theta.cos()), epsilon = 1e-9);
    }

    #[test]
    fn non_cyclic_initial_state_is_detected() {
        // At ω₀ = ω₁ = ω the one-cycle operator is the identity, so |0⟩ is
        // cyclic there; ω = 2 breaks that.
        let s = seg(1.0, 1.0, 1.0);
        assert!(
            check_cyclicity(&s, &SpinorState::zero(), DEFAULT_STEPS)
                .unwrap()
                .cyclic
        );
        let s = seg(1.0, 1.0, 2.0);
        let check = check_cyclicity(&s, &SpinorState::zero(), DEFAULT_STEPS).unwrap();
        assert!(!check.cyclic);
        assert!(check.defect > 1e-3);
        assert!(matches!(
            extract_phase_triple(&s, &SpinorState::zero(), DEFAULT_STEPS),
            Err(Error::NonCyclic { .. })
        ));
        let s = seg(0.0, 0.7, 1.3);
        assert!(
            check_cyclicity(&s, &SpinorState::zero(), 200)
                .unwrap()
                .cyclic
        );
    }

    #[test]
    fn berry_solid_angle_cases() {
        assert_abs_diff_eq!(
            berry_solid_angle(&seg(1.0, 0.0, 1.0)).unwrap(),
            TAU,
            epsilon = 1e-12
        );
        assert_eq!(berry_solid_angle(&seg(0.0, 1.0, 1.0)).unwrap(), 0.0);
        assert!(matches!(
            berry_solid_angle(&seg(0.0, 0.0, 1.0)),
            Err(Error::Degenerate(_))
        ));
        assert_abs_diff_eq!(
            berry_solid_angle(&seg(1.0, 1.0, 1.0)).unwrap(),
            TAU * (1.0 - 1.0 / 2f64.sqrt()),
            epsilon = 1e-12
        );
    }
}
