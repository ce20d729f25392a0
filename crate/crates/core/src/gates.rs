//! Single- and two-qubit gates realized by cyclic evolutions, the
//! noncommutability criterion, the CNOT composition and field-axis rotations.

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::FRAC_PI_4;
use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix2, Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::phase::angular_distance;
use crate::segment::RotatingFieldSegment;
use crate::spinor::{sigma_x, sigma_y, sigma_z, C64, I, ONE, ZERO};

/// Unitarity tolerance for [`GateMatrix::from_matrix`].
pub const UNITARY_TOLERANCE: f64 = 1e-10;
/// Zero threshold of the noncommutability predicate.
pub const NONCOMMUTABLE_THRESHOLD: f64 = 1e-12;
/// Tolerance of the mod-2π comparison behind the nontriviality flag.
pub const NONTRIVIAL_TOLERANCE: f64 = 1e-9;

/// A 2×2 or 4×4 unitary, basis `|00⟩, |01⟩, |10⟩, |11⟩` with the control
/// qubit first.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    entries: DMatrix<C64>,
}

impl GateMatrix {
    /// Checked constructor: square, dimension 2 or 4, unitary within
    /// [`UNITARY_TOLERANCE`].
    pub fn from_matrix(entries: DMatrix<C64>) -> Result<Self> {
        let dim = entries.nrows();
        if entries.ncols() != dim || !(dim == 2 || dim == 4) {
            return Err(Error::InvalidParameter(format!(
                "gate must be 2×2 or 4×4, got {}×{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let gate = Self { entries };
        let defect = gate.unitarity_defect();
        if defect > UNITARY_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "matrix is not unitary (‖U†U - I‖ = {defect:.3e})"
            )));
        }
        Ok(gate)
    }

    fn from_unchecked(entries: DMatrix<C64>) -> Self {
        Self { entries }
    }

    pub fn from_matrix2(m: &Matrix2<C64>) -> Result<Self> {
        Self::from_matrix(DMatrix::from_iterator(2, 2, m.iter().copied()))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_unchecked(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    /// Frobenius norm of `U†U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim();
        (self.entries.adjoint() * &self.entries - DMatrix::<C64>::identity(dim, dim)).norm()
    }

    pub fn determinant(&self) -> C64 {
        self.entries.determinant()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_unchecked(self.entries.adjoint())
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_unchecked(&self.entries * &other.entries)
    }

    /// `self ⊗ other` for two single-qubit gates.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_unchecked(self.entries.kronecker(&other.entries))
    }

    pub fn apply(&self, state: &DVector<C64>) -> DVector<C64> {
        &self.entries * state
    }

    /// Largest entrywise distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "gate dimensions differ");
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        self.dim() == other.dim() && self.max_abs_diff(other) <= tolerance
    }

    /// Entrywise distance after removing the best global phase.
    pub fn max_abs_diff_up_to_phase(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "gate dimensions differ");
        let overlap: C64 = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        if overlap.norm() == 0.0 {
            return self.max_abs_diff(other);
        }
        let phase = overlap / overlap.norm();
        let aligned = Self::from_unchecked(&self.entries * phase);
        aligned.max_abs_diff(other)
    }

    pub fn approx_eq_up_to_phase(&self, other: &Self, tolerance: f64) -> bool {
        self.dim() == other.dim() && self.max_abs_diff_up_to_phase(other) <= tolerance
    }
}

impl fmt::Display for GateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|c| {
                    let z = self.entries[(r, c)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn single_qubit_matrix(chi: f64, gamma: f64) -> Matrix2<C64> {
    let (s, c) = gamma.sin_cos();
    let axis = sigma_z() * C64::new(chi.cos(), 0.0) + sigma_x() * C64::new(chi.sin(), 0.0);
    Matrix2::identity() * C64::new(c, 0.0) + axis * C64::new(0.0, s)
}

fn to_dynamic(m: &Matrix2<C64>) -> DMatrix<C64> {
    DMatrix::from_iterator(2, 2, m.iter().copied())
}

/// `U(χ, γ) = cos γ·I + i sin γ (σ_z cos χ + σ_x sin χ)`: phase `e^{iγ}` on
/// the cyclic state at polar angle `χ`, `e^{-iγ}` on its partner.
pub fn build_single_qubit_gate(chi: f64, gamma: f64) -> GateMatrix {
    GateMatrix::from_unchecked(to_dynamic(&single_qubit_matrix(chi, gamma)))
}

/// The inverse gate, obtained by reversing the sign of the phase.
pub fn gate_adjoint(chi: f64, gamma: f64) -> GateMatrix {
    build_single_qubit_gate(chi, -gamma)
}

/// `sin γ₁ sin γ₂ sin(χ₂ - χ₁) ≠ 0`.
pub fn noncommutable(chi1: f64, gamma1: f64, chi2: f64, gamma2: f64) -> bool {
    (gamma1.sin() * gamma2.sin() * (chi2 - chi1).sin()).abs() > NONCOMMUTABLE_THRESHOLD
}

/// Frobenius norm of `[A, B]`.
pub fn commutator_norm(a: &GateMatrix, b: &GateMatrix) -> f64 {
    (a.matrix() * b.matrix() - b.matrix() * a.matrix()).norm()
}

fn block_diag(upper: &Matrix2<C64>, lower: &Matrix2<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(upper);
    m.view_mut((2, 2), (2, 2)).copy_from(lower);
    m
}

/// A conditional two-qubit gate and whether it differs between the two
/// control blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitGate {
    pub gate: GateMatrix,
    pub nontrivial: bool,
}

/// `diag(U(χ⁰, γ⁰), U(χ¹, γ¹))`; nontrivial iff `γ¹ ≠ γ⁰` or `χ¹ ≠ χ⁰`
/// modulo 2π.
pub fn build_two_qubit_diag(gamma0: f64, chi0: f64, gamma1: f64, chi1: f64) -> TwoQubitGate {
    let gate = GateMatrix::from_unchecked(block_diag(
        &single_qubit_matrix(chi0, gamma0),
        &single_qubit_matrix(chi1, gamma1),
    ));
    let nontrivial = angular_distance(gamma1, gamma0) > NONTRIVIAL_TOLERANCE
        || angular_distance(chi1, chi0) > NONTRIVIAL_TOLERANCE;
    TwoQubitGate { gate, nontrivial }
}

/// Multiplies the control-`|1⟩` block by `e^{-iγ¹}`, a phase local to the
/// target that turns `diag(1, 1, e^{iγ¹}, e^{-iγ¹})` into a controlled phase.
pub fn remove_control_one_phase(gate: &GateMatrix, gamma1: f64) -> Result<GateMatrix> {
    if gate.dim() != 4 {
        return Err(Error::InvalidParameter("expected a two-qubit gate".into()));
    }
    let mut m = gate.matrix().clone();
    let factor = C64::from_polar(1.0, -gamma1);
    for r in 2..4 {
        for c in 0..4 {
            m[(r, c)] *= factor;
        }
    }
    Ok(GateMatrix::from_unchecked(m))
}

/// `diag(I, U(χ, γ))`.
pub fn build_controlled_gate(gamma: f64, chi: f64) -> GateMatrix {
    GateMatrix::from_unchecked(block_diag(
        &Matrix2::identity(),
        &single_qubit_matrix(chi, gamma),
    ))
}

/// `[I ⊗ U(π/4, π/2)] · diag(I, U(0, π/2)) · [I ⊗ U(π/4, π/2)]†`, which is
/// `diag(I, iσ_x)`.
pub fn compose_cnot() -> GateMatrix {
    let local = GateMatrix::identity(2).kron(&build_single_qubit_gate(FRAC_PI_4, FRAC_PI_2));
    let controlled = build_controlled_gate(FRAC_PI_2, 0.0);
    local.compose(&controlled).compose(&local.adjoint())
}

/// `diag(I, iσ_x)`.
pub fn cnot_reference() -> GateMatrix {
    let x = sigma_x() * I;
    GateMatrix::from_unchecked(block_diag(&Matrix2::identity(), &x))
}

/// Computational basis vector `|control, target⟩`.
pub fn basis_state(control: u8, target: u8) -> DVector<C64> {
    let mut v = DVector::from_element(4, ZERO);
    v[2 * usize::from(control & 1) + usize::from(target & 1)] = ONE;
    v
}

/// A rotation of the field (and of every state) about `ŷ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRotation {
    pub angle: f64,
}

impl AxisRotation {
    pub fn new(angle: f64) -> Self {
        Self { angle }
    }

    /// `exp(-i angle σ_y / 2)`.
    pub fn su2(&self) -> Matrix2<C64> {
        let (s, c) = (0.5 * self.angle).sin_cos();
        Matrix2::identity() * C64::new(c, 0.0) - sigma_y() * C64::new(0.0, s)
    }

    pub fn so3(&self) -> Rotation3<f64> {
        Rotation3::from_axis_angle(&Vector3::y_axis(), self.angle)
    }
}

/// Tilts the field about `ŷ` so that its cyclic pair sits at polar angle
/// `new_chi`. The area swept, and so every phase, is unchanged.
pub fn rotate_field_axis(
    segment: &RotatingFieldSegment,
    new_chi: f64,
) -> Result<RotatingFieldSegment> {
    segment.validate()?;
    let body = segment.body_chi()?;
    Ok(segment.with_axis_tilt(new_chi - body))
}
