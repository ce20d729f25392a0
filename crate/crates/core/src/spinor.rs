//! Two-component spin states and their Bloch-sphere image.

use nalgebra::{Matrix2, Vector2, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Normalization tolerance accepted by [`SpinorState::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

pub fn sigma_x() -> Matrix2<C64> {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Matrix2<C64> {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Matrix2<C64> {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

/// `v · σ` for a real 3-vector.
pub fn pauli_dot(v: &Vector3<f64>) -> Matrix2<C64> {
    Matrix2::new(
        C64::new(v.z, 0.0),
        C64::new(v.x, -v.y),
        C64::new(v.x, v.y),
        C64::new(-v.z, 0.0),
    )
}

/// `exp(-i θ·σ / 2)`, the SU(2) element rotating Bloch vectors by `|θ|`
/// about `θ̂`.
pub fn su2_exp(theta: &Vector3<f64>) -> Matrix2<C64> {
    let angle = theta.norm();
    if angle == 0.0 {
        return Matrix2::identity();
    }
    let (s, c) = (0.5 * angle).sin_cos();
    let k = theta / angle;
    Matrix2::new(
        C64::new(c, -s * k.z),
        C64::new(-s * k.y, -s * k.x),
        C64::new(s * k.y, -s * k.x),
        C64::new(c, s * k.z),
    )
}

/// A normalized pure qubit state `amp0|0⟩ + amp1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorState {
    pub amp0: C64,
    pub amp1: C64,
}

impl SpinorState {
    /// Checked constructor; the amplitudes must already be normalized.
    pub fn new(amp0: C64, amp1: C64) -> Result<Self> {
        let state = Self { amp0, amp1 };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE || !norm_sqr.is_finite() {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amp0: C64, amp1: C64) -> Result<Self> {
        let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        Ok(Self {
            amp0: amp0 / norm,
            amp1: amp1 / norm,
        })
    }

    pub(crate) fn from_vector_unchecked(v: &Vector2<C64>) -> Self {
        Self {
            amp0: v[0],
            amp1: v[1],
        }
    }

    pub fn zero() -> Self {
        Self {
            amp0: ONE,
            amp1: ZERO,
        }
    }

    pub fn one() -> Self {
        Self {
            amp0: ZERO,
            amp1: ONE,
        }
    }

    /// `cos(χ/2)|0⟩ + sin(χ/2)|1⟩`, the `+` member of a cyclic pair with
    /// polar angle `χ` in the xz-plane.
    pub fn cyclic_plus(chi: f64) -> Self {
        let (s, c) = (0.5 * chi).sin_cos();
        Self {
            amp0: C64::new(c, 0.0),
            amp1: C64::new(s, 0.0),
        }
    }

    /// `-sin(χ/2)|0⟩ + cos(χ/2)|1⟩`, the orthogonal partner of
    /// [`SpinorState::cyclic_plus`].
    pub fn cyclic_minus(chi: f64) -> Self {
        Self::cyclic_plus(chi).orthogonal()
    }

    /// State with Bloch angles `(θ, φ)`:
    /// `[e^{-iφ/2} cos(θ/2), e^{iφ/2} sin(θ/2)]`.
    pub fn from_bloch_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = (0.5 * theta).sin_cos();
        Self {
            amp0: C64::from_polar(c, -0.5 * phi),
            amp1: C64::from_polar(s, 0.5 * phi),
        }
    }

    /// A state whose Bloch vector is `n` (must be a unit vector).
    pub fn from_bloch_vector(n: &Vector3<f64>) -> Result<Self> {
        let norm = n.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnitVector { norm });
        }
        let theta = n.z.clamp(-1.0, 1.0).acos();
        let phi = n.y.atan2(n.x);
        Ok(Self::from_bloch_angles(theta, phi))
    }

    /// The orthogonal state `(-conj(b), conj(a))`, whose Bloch vector is
    /// antipodal.
    pub fn orthogonal(&self) -> Self {
        Self {
            amp0: -self.amp1.conj(),
            amp1: self.amp0.conj(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }

    /// `n = ⟨ψ|σ|ψ⟩`.
    pub fn bloch_vector(&self) -> Vector3<f64> {
        let cross = self.amp0.conj() * self.amp1;
        Vector3::new(
            2.0 * cross.re,
            2.0 * cross.im,
            self.amp0.norm_sqr() - self.amp1.norm_sqr(),
        )
    }

    pub fn as_vector(&self) -> Vector2<C64> {
        Vector2::new(self.amp0, self.amp1)
    }

    /// `⟨ψ|M|ψ⟩` for a 2×2 operator.
    pub fn expectation(&self, op: &Matrix2<C64>) -> C64 {
        let v = self.as_vector();
        (v.adjoint() * op * v)[(0, 0)]
    }

    pub fn apply(&self, op: &Matrix2<C64>) -> Self {
        Self::from_vector_unchecked(&(op * self.as_vector()))
    }
}
