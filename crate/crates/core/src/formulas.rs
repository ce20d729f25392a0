//! Closed-form one-cycle phases of the rotating field and the dark-state
//! parameter conditions.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::phase::PhaseTriple;
use crate::segment::{ControlState, RotatingFieldSegment};
use crate::spinor::SpinorState;

/// Polar angle of the cyclic pair, `χ ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclicStateSpec {
    pub chi: f64,
}

impl CyclicStateSpec {
    pub fn plus(&self) -> SpinorState {
        SpinorState::cyclic_plus(self.chi)
    }

    pub fn minus(&self) -> SpinorState {
        SpinorState::cyclic_minus(self.chi)
    }
}

/// `χ = atan2(ω₀, ω₁ - ω)`.
pub fn cyclic_angle_chi(omega0: f64, omega1: f64, omega: f64) -> Result<CyclicStateSpec> {
    check_frequencies(omega0, omega1, omega)?;
    let detuning = omega1 - omega;
    if omega0 == 0.0 && detuning == 0.0 {
        return Err(Error::Degenerate(
            "ω₀ = 0 and ω₁ = ω: every state is cyclic".into(),
        ));
    }
    Ok(CyclicStateSpec {
        chi: omega0.atan2(detuning),
    })
}

fn check_frequencies(omega0: f64, omega1: f64, omega: f64) -> Result<()> {
    if !(omega0.is_finite() && omega1.is_finite() && omega.is_finite()) {
        return Err(Error::InvalidParameter("non-finite frequency".into()));
    }
    if omega <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "rotation rate must be positive, got ω = {omega}"
        )));
    }
    if omega0 < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "transverse drive must be non-negative, got ω₀ = {omega0}"
        )));
    }
    Ok(())
}

/// One-cycle phases of the `+` cyclic state:
///
/// ```text
/// γ_g = -π (1 - (ω₁ - ω)/Ω)
/// γ_d = -π (ω₀² + ω₁(ω₁ - ω)) / (ωΩ)
/// γ   = -π (1 + Ω/ω),          Ω = √(ω₀² + (ω₁ - ω)²)
/// ```
pub fn single_qubit_phases(omega0: f64, omega1: f64, omega: f64) -> Result<PhaseTriple> {
    check_frequencies(omega0, omega1, omega)?;
    let detuning = omega1 - omega;
    let big_omega = omega0.hypot(detuning);
    if big_omega == 0.0 {
        return Err(Error::Degenerate("Ω = 0".into()));
    }
    Ok(PhaseTriple {
        geometric: -PI * (1.0 - detuning / big_omega),
        dynamic: -PI * (omega0 * omega0 + omega1 * detuning) / (omega * big_omega),
        total: -PI * (1.0 + big_omega / omega),
    })
}

/// Target-qubit drive with the control qubit in a definite state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitParams {
    pub omega0: f64,
    pub omega1: f64,
    pub omega: f64,
    pub j: f64,
    pub delta: ControlState,
}

impl TwoQubitParams {
    /// `ω₁^δ = ω₁ + (2δ - 1)J`.
    pub fn effective_omega1(&self) -> f64 {
        self.omega1 + self.delta.sign() * self.j
    }

    /// The single-qubit segment seen by the target.
    pub fn effective_segment(&self) -> Result<RotatingFieldSegment> {
        RotatingFieldSegment::new(self.omega0, self.effective_omega1(), self.omega)
    }
}

/// Conditional one-cycle phases: [`single_qubit_phases`] at `ω₁ → ω₁^δ`.
pub fn conditional_phases(params: &TwoQubitParams) -> Result<PhaseTriple> {
    single_qubit_phases(params.omega0, params.effective_omega1(), params.omega)
}

/// One-cycle phases of a segment's `+` cyclic state, reversed segments
/// included. The axis tilt does not change them.
///
/// For a reversed field the cyclic angle is `atan2(ω₀, ω₁ + ω)` and
///
/// ```text
/// γ_g = -π (1 - (ω₁ + ω)/Ω)
/// γ_d = +π (ω₀² + ω₁(ω₁ + ω)) / (ωΩ)
/// γ   = -π (1 - Ω/ω),          Ω = √(ω₀² + (ω₁ + ω)²)
/// ```
pub fn closed_form_phases(segment: &RotatingFieldSegment) -> Result<PhaseTriple> {
    segment.validate()?;
    if !segment.is_single_cycle() {
        return Err(Error::InvalidParameter(
            "closed forms cover exactly one rotation period".into(),
        ));
    }
    if !segment.reversed {
        return single_qubit_phases(segment.omega0, segment.omega1, segment.omega);
    }
    let (w0, w1, w) = (segment.omega0, segment.omega1, segment.omega);
    let longitudinal = w1 + w;
    let big_omega = w0.hypot(longitudinal);
    if big_omega == 0.0 {
        return Err(Error::Degenerate("Ω = 0".into()));
    }
    Ok(PhaseTriple {
        geometric: -PI * (1.0 - longitudinal / big_omega),
        dynamic: PI * (w0 * w0 + w1 * longitudinal) / (w * big_omega),
        total: -PI * (1.0 - big_omega / w),
    })
}

/// Rotation rate that makes the single-qubit cyclic pair dark:
/// `ω = (ω₀² + ω₁²)/ω₁`.
pub fn dark_state_frequency_single(omega0: f64, omega1: f64) -> Result<f64> {
    if !(omega0.is_finite() && omega1.is_finite()) || omega0 < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need finite ω₀ ≥ 0, got ω₀ = {omega0}"
        )));
    }
    if omega1 <= 0.0 {
        return Err(Error::Domain(format!(
            "no dark-state rotation rate for ω₁ = {omega1} ≤ 0"
        )));
    }
    Ok((omega0 * omega0 + omega1 * omega1) / omega1)
}

/// Dark-state geometric phase `-π (1 + ω₀/√(ω₀² + ω₁²))` as a function of
/// `ω₁/ω₀`.
pub fn dark_state_geometric_phase(ratio: f64) -> f64 {
    if ratio.is_infinite() {
        return -PI;
    }
    -PI * (1.0 + 1.0 / (1.0 + ratio * ratio).sqrt())
}

/// Dark-state drive for the two-qubit scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDarkState {
    pub omega: f64,
    pub omega0: f64,
    /// `ω₁ = J`: the transverse drive vanishes.
    pub boundary: bool,
}

/// `ω = 2ω₁`, `ω₀ = √(ω₁² - J²)`; both conditional cyclic pairs are then
/// dark.
pub fn dark_state_condition_two_qubit(omega1: f64, j: f64) -> Result<TwoQubitDarkState> {
    if !(omega1.is_finite() && j.is_finite()) || j <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coupling must be positive and finite, got J = {j}"
        )));
    }
    if omega1 < j {
        return Err(Error::Domain(format!(
            "ω₁ = {omega1} < J = {j}: no real ω₀"
        )));
    }
    Ok(TwoQubitDarkState {
        omega: 2.0 * omega1,
        omega0: ((omega1 - j) * (omega1 + j)).sqrt(),
        boundary: omega1 == j,
    })
}
