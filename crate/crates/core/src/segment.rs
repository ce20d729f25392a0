//! The rotating drive field of one loop, expressed in angular frequencies
//! (`ħ = 1`, every `g μ B / ħ` factor folded into the `ω`s).

use std::f64::consts::TAU;

use nalgebra::{Matrix2, Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::spinor::{pauli_dot, SpinorState, C64};

/// State of the control qubit in the two-qubit effective model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControlState {
    Zero,
    One,
}

impl ControlState {
    pub const BOTH: [ControlState; 2] = [ControlState::Zero, ControlState::One];

    /// `2δ - 1`.
    pub fn sign(self) -> f64 {
        match self {
            ControlState::Zero => -1.0,
            ControlState::One => 1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            ControlState::Zero => 0,
            ControlState::One => 1,
        }
    }

    pub fn from_index(delta: u8) -> Result<Self> {
        match delta {
            0 => Ok(ControlState::Zero),
            1 => Ok(ControlState::One),
            other => Err(Error::InvalidParameter(format!(
                "control state index must be 0 or 1, got {other}"
            ))),
        }
    }
}

/// One loop of the rotating drive.
///
/// The precession vector is `ω⃗(t) = s·(ω₀ cos ωt, ω₀ sin ωt, ω₁)` with
/// `s = -1` when `reversed`, then rotated by `axis_tilt` about `ŷ`. The
/// Hamiltonian is `H(t) = ½ ω⃗(t)·σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingFieldSegment {
    pub omega0: f64,
    pub omega1: f64,
    pub omega: f64,
    pub reversed: bool,
    pub axis_tilt: f64,
    pub duration: f64,
}

impl RotatingFieldSegment {
    /// A single untilted cycle of duration `2π/ω`.
    pub fn new(omega0: f64, omega1: f64, omega: f64) -> Result<Self> {
        let segment = Self {
            omega0,
            omega1,
            omega,
            reversed: false,
            axis_tilt: 0.0,
            duration: TAU / omega,
        };
        segment.validate()?;
        Ok(segment)
    }

    pub fn reversed(mut self) -> Self {
        self.reversed = !self.reversed;
        self
    }

    pub fn with_axis_tilt(mut self, tilt: f64) -> Self {
        self.axis_tilt = tilt;
        self
    }

    pub fn with_duration(mut self, duration: f64) -> Result<Self> {
        self.duration = duration;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega0,
            self.omega1,
            self.omega,
            self.axis_tilt,
            self.duration,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter(
                "non-finite segment parameter".into(),
            ));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "rotation rate must be positive, got ω = {}",
                self.omega
            )));
        }
        if self.omega0 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "transverse drive must be non-negative, got ω₀ = {}",
                self.omega0
            )));
        }
        if self.duration <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// True when the duration is one full rotation period.
    pub fn is_single_cycle(&self) -> bool {
        (self.duration - self.period()).abs() <= 1e-12 * self.period()
    }

    fn orientation(&self) -> f64 {
        if self.reversed {
            -1.0
        } else {
            1.0
        }
    }

    pub fn tilt_rotation(&self) -> Rotation3<f64> {
        Rotation3::from_axis_angle(&Vector3::y_axis(), self.axis_tilt)
    }

    /// Precession vector in the segment's own (untilted) frame.
    pub fn body_field(&self, t: f64) -> Vector3<f64> {
        let (s, c) = (self.omega * t).sin_cos();
        self.orientation() * Vector3::new(self.omega0 * c, self.omega0 * s, self.omega1)
    }

    /// Precession vector `ω⃗(t)` in the lab frame.
    pub fn field(&self, t: f64) -> Vector3<f64> {
        if self.axis_tilt == 0.0 {
            self.body_field(t)
        } else {
            self.tilt_rotation() * self.body_field(t)
        }
    }

    pub fn hamiltonian(&self, t: f64) -> Matrix2<C64> {
        pauli_dot(&self.field(t)) * C64::new(0.5, 0.0)
    }

    /// Instantaneous energy `⟨ψ|H(t)|ψ⟩ = ½ ω⃗(t)·n`.
    pub fn energy(&self, t: f64, state: &SpinorState) -> f64 {
        0.5 * self.field(t).dot(&state.bloch_vector())
    }

    /// Polar angle of the cyclic pair in the body frame: the two-argument
    /// arctangent of `(ω₀, ω₁ - ω)`, or `(ω₀, ω₁ + ω)` for a reversed field.
    pub fn body_chi(&self) -> Result<f64> {
        let longitudinal = if self.reversed {
            self.omega1 + self.omega
        } else {
            self.omega1 - self.omega
        };
        if self.omega0 == 0.0 && longitudinal == 0.0 {
            return Err(Error::Degenerate(
                "ω₀ = 0 and resonant longitudinal field: every state is cyclic".into(),
            ));
        }
        Ok(self.omega0.atan2(longitudinal))
    }

    /// Polar angle of the cyclic pair in the lab frame.
    pub fn chi(&self) -> Result<f64> {
        Ok(self.body_chi()? + self.axis_tilt)
    }

    /// The `+` cyclic state of this segment, `R_y(tilt)|ψ₊(χ)⟩`.
    pub fn cyclic_state(&self) -> Result<SpinorState> {
        Ok(SpinorState::cyclic_plus(self.chi()?))
    }

    /// Target-qubit segment seen with the control qubit in `control`:
    /// `ω₁ → ω₁ + (2δ-1)J`. For a reversed segment the coupling is reversed
    /// together with the drive.
    pub fn with_coupling(&self, coupling: f64, control: ControlState) -> Self {
        let mut effective = *self;
        effective.omega1 += control.sign() * coupling;
        effective
    }
}
