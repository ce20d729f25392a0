//! Full four-dimensional propagation of two coupled qubits, used to check the
//! effective single-qubit model `ω₁ → ω₁ + (2δ-1)J`.
//!
//! Basis `|00⟩, |01⟩, |10⟩, |11⟩` with the control qubit first. The
//! Hamiltonian is `H₁⊗I + I⊗H₂ - (J/2) σ_z⊗σ_z`.

use nalgebra::{Matrix2, Matrix4, Vector3, Vector4};

use crate::dynamics::{check_steps, propagate_spinor, solid_angle_of_path, BlochPath};
use crate::error::{Error, Result};
use crate::formulas::{conditional_phases, TwoQubitParams};
use crate::phase::{angular_distance, reduce_mod_2pi, PhaseTriple};
use crate::quadrature::integrate_uniform;
use crate::segment::{ControlState, RotatingFieldSegment};
use crate::spinor::{sigma_z, SpinorState, C64};

/// A two-qubit state vector.
pub type State4 = Vector4<C64>;

const NORM_TOLERANCE: f64 = 1e-12;

/// `|control⟩ ⊗ |target⟩`.
pub fn product_state(control: &SpinorState, target: &SpinorState) -> State4 {
    Vector4::new(
        control.amp0 * target.amp0,
        control.amp0 * target.amp1,
        control.amp1 * target.amp0,
        control.amp1 * target.amp1,
    )
}

fn coupling_term(j: f64) -> Matrix4<C64> {
    sigma_z().kronecker(&sigma_z()) * C64::new(-0.5 * j, 0.0)
}

fn local_terms(
    control: &RotatingFieldSegment,
    target: &RotatingFieldSegment,
    t: f64,
) -> Matrix4<C64> {
    let id = Matrix2::<C64>::identity();
    control.hamiltonian(t).kronecker(&id) + id.kronecker(&target.hamiltonian(t))
}

/// `H(t) = H₁(t)⊗I + I⊗H₂(t) - (J/2) σ_z⊗σ_z`.
pub fn two_qubit_hamiltonian(
    control: &RotatingFieldSegment,
    target: &RotatingFieldSegment,
    j: f64,
    t: f64,
) -> Matrix4<C64> {
    local_terms(control, target, t) + coupling_term(j)
}

/// Sampled two-qubit evolution over the target segment's duration.
#[derive(Debug, Clone)]
pub struct TwoQubitTrajectory {
    pub control: RotatingFieldSegment,
    pub target: RotatingFieldSegment,
    pub coupling: f64,
    pub times: Vec<f64>,
    pub states: Vec<State4>,
}

impl TwoQubitTrajectory {
    pub fn final_state(&self) -> &State4 {
        self.states.last().expect("trajectory is never empty")
    }

    /// `⟨Ψ(0)|Ψ(τ)⟩`.
    pub fn overlap(&self) -> C64 {
        self.states[0].dotc(self.final_state())
    }

    /// Bloch vector of the target's reduced density matrix at sample `k`.
    pub fn target_bloch_vector(&self, k: usize) -> Vector3<f64> {
        let c = &self.states[k];
        let coherence = c[0].conj() * c[1] + c[2].conj() * c[3];
        Vector3::new(
            2.0 * coherence.re,
            2.0 * coherence.im,
            c[0].norm_sqr() - c[1].norm_sqr() + c[2].norm_sqr() - c[3].norm_sqr(),
        )
    }

    /// Reduced target path; fails once the qubits are entangled enough that
    /// the reduced Bloch vector leaves the sphere.
    pub fn target_bloch_path(&self) -> Result<BlochPath> {
        let points = (0..self.states.len())
            .map(|k| self.target_bloch_vector(k))
            .collect();
        BlochPath::from_samples(self.times.clone(), points)
    }

    /// `-∫⟨Ψ|I⊗H₂ + H_I|Ψ⟩dt`, the dynamic phase attributed to the target.
    pub fn target_dynamic_phase(&self) -> f64 {
        let id = Matrix2::<C64>::identity();
        let coupling = coupling_term(self.coupling);
        let energies: Vec<f64> = self
            .times
            .iter()
            .zip(&self.states)
            .map(|(&t, psi)| {
                let h = id.kronecker(&self.target.hamiltonian(t)) + coupling;
                psi.dotc(&(h * psi)).re
            })
            .collect();
        -integrate_uniform(&energies, self.times[1] - self.times[0])
    }
}

/// Integrates the four-dimensional Schrödinger equation with the
/// fourth-order Magnus scheme over `target.duration`.
pub fn propagate_two_qubit_full(
    control: &RotatingFieldSegment,
    target: &RotatingFieldSegment,
    j: f64,
    initial: &State4,
    steps: usize,
) -> Result<TwoQubitTrajectory> {
    control.validate()?;
    target.validate()?;
    check_steps(steps)?;
    if !j.is_finite() {
        return Err(Error::InvalidParameter("non-finite coupling".into()));
    }
    let norm_sqr = initial.norm_squared();
    if (norm_sqr - 1.0).abs() > NORM_TOLERANCE || !norm_sqr.is_finite() {
        return Err(Error::NotNormalized { norm_sqr });
    }

    let h = target.duration / steps as f64;
    let offset = h * 3f64.sqrt() / 6.0;
    let minus_i = C64::new(0.0, -1.0);
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut psi = *initial;
    times.push(0.0);
    states.push(psi);
    for k in 0..steps {
        let t = k as f64 * h;
        let a1 = two_qubit_hamiltonian(control, target, j, t + 0.5 * h - offset) * minus_i;
        let a2 = two_qubit_hamiltonian(control, target, j, t + 0.5 * h + offset) * minus_i;
        let generator = (a1 + a2) * C64::new(0.5 * h, 0.0)
            + (a2 * a1 - a1 * a2) * C64::new(3f64.sqrt() / 12.0 * h * h, 0.0);
        psi = generator.exp() * psi;
        times.push((k + 1) as f64 * h);
        states.push(psi);
    }
    Ok(TwoQubitTrajectory {
        control: *control,
        target: *target,
        coupling: j,
        times,
        states,
    })
}

/// Target segment seen with the control frozen in `|δ⟩`. A reversed target
/// field reverses the coupling's effective sign as well.
pub fn effective_target(
    target: &RotatingFieldSegment,
    j: f64,
    delta: ControlState,
) -> RotatingFieldSegment {
    let signed = if target.reversed { -j } else { j };
    target.with_coupling(signed, delta)
}

/// Numerical conditional phases against the effective model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalPhaseCheck {
    pub numeric: PhaseTriple,
    pub effective: PhaseTriple,
    /// Largest component difference; the total is compared modulo 2π.
    pub deviation: f64,
}

/// Control undriven (`ω₀ᶜ = 0`, Zeeman rate `control_omega1`) and prepared in
/// `|δ⟩`; target prepared in the cyclic state of its effective segment.
/// Phases are read from the full propagation and compared with
/// [`conditional_phases`].
pub fn undriven_control_phases(
    control_omega1: f64,
    target: &RotatingFieldSegment,
    j: f64,
    delta: ControlState,
    steps: usize,
) -> Result<ConditionalPhaseCheck> {
    if target.axis_tilt != 0.0 || target.reversed {
        return Err(Error::InvalidParameter(
            "conditional-phase check needs an untilted forward target".into(),
        ));
    }
    let control = RotatingFieldSegment::new(0.0, control_omega1, target.omega)?;
    let effective = effective_target(target, j, delta);
    let control_state = match delta {
        ControlState::Zero => SpinorState::zero(),
        ControlState::One => SpinorState::one(),
    };
    let target_state = effective.cyclic_state()?;
    let initial = product_state(&control_state, &target_state);
    let trajectory = propagate_two_qubit_full(&control, target, j, &initial, steps)?;

    // The frozen control only contributes e^{∓iω₁ᶜτ/2}.
    let control_phase = -0.5 * control_omega1 * (-delta.sign()) * target.duration;
    let overlap_phase = reduce_mod_2pi(trajectory.overlap().arg() - control_phase);
    let geometric = solid_angle_of_path(&trajectory.target_bloch_path()?)?;
    let numeric = PhaseTriple::from_parts(trajectory.target_dynamic_phase(), geometric);

    let expected = conditional_phases(&TwoQubitParams {
        omega0: target.omega0,
        omega1: target.omega1,
        omega: target.omega,
        j,
        delta,
    })?;
    let deviation = (numeric.geometric - expected.geometric)
        .abs()
        .max((numeric.dynamic - expected.dynamic).abs())
        .max(angular_distance(numeric.total, expected.total))
        .max(angular_distance(overlap_phase, expected.total));
    Ok(ConditionalPhaseCheck {
        numeric,
        effective: expected,
        deviation,
    })
}

/// Both qubits driven by fields rotating at the target's rate; the control is
/// prepared in the cyclic state of its own segment closest to `|δ⟩`. Returns
/// the distance on the circle between the target's conditional total phase
/// `arg(⟨Ψ(0)|Ψ(τ)⟩ / ⟨c(0)|c(τ)⟩)` and the effective-model value.
pub fn driven_control_deviation(
    control: &RotatingFieldSegment,
    target: &RotatingFieldSegment,
    j: f64,
    delta: ControlState,
    steps: usize,
) -> Result<f64> {
    if target.axis_tilt != 0.0 || target.reversed {
        return Err(Error::InvalidParameter(
            "conditional-phase check needs an untilted forward target".into(),
        ));
    }
    let control = control.with_duration(target.duration)?;
    let chi = control.chi()?;
    let control_state = match delta {
        ControlState::Zero => SpinorState::cyclic_plus(chi),
        ControlState::One => SpinorState::cyclic_minus(chi),
    };
    let effective = effective_target(target, j, delta);
    let initial = product_state(&control_state, &effective.cyclic_state()?);
    let full = propagate_two_qubit_full(&control, target, j, &initial, steps)?;
    let alone = propagate_spinor(&control, &control_state, steps)?;
    let conditional = (full.overlap() / alone.overlap()).arg();
    let expected = conditional_phases(&TwoQubitParams {
        omega0: target.omega0,
        omega1: target.omega1,
        omega: target.omega,
        j,
        delta,
    })?;
    Ok(angular_distance(conditional, expected.total))
}
