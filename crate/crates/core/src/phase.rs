use std::f64::consts::{PI, TAU};
use std::fmt;

/// Total, dynamic and geometric phase of one evolution, in radians.
///
/// Values are winding-resolved: a geometric phase of `-1.7071π` is kept as
/// such rather than being folded into `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseTriple {
    pub total: f64,
    pub dynamic: f64,
    pub geometric: f64,
}

impl PhaseTriple {
    /// Builds a triple whose total is the sum of its parts.
    pub fn from_parts(dynamic: f64, geometric: f64) -> Self {
        Self {
            total: dynamic + geometric,
            dynamic,
            geometric,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            total: -self.total,
            dynamic: -self.dynamic,
            geometric: -self.geometric,
        }
    }

    /// Component-wise sum, used to accumulate phases over several loops.
    pub fn add(&self, other: &Self) -> Self {
        Self {
            total: self.total + other.total,
            dynamic: self.dynamic + other.dynamic,
            geometric: self.geometric + other.geometric,
        }
    }

    /// Largest component-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.total - other.total)
            .abs()
            .max((self.dynamic - other.dynamic).abs())
            .max((self.geometric - other.geometric).abs())
    }

    pub fn in_units_of_pi(&self) -> Self {
        Self {
            total: self.total / PI,
            dynamic: self.dynamic / PI,
            geometric: self.geometric / PI,
        }
    }
}

impl fmt::Display for PhaseTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "γ_g = {:.9}π, γ_d = {:.9}π, γ = {:.9}π",
            self.geometric / PI,
            self.dynamic / PI,
            self.total / PI
        )
    }
}

/// Reduces an angle into `(-π, π]`.
pub fn reduce_mod_2pi(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    reduce_mod_2pi(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_range() {
        assert!((reduce_mod_2pi(-1.6 * PI) - 0.4 * PI).abs() < 1e-14);
        assert_eq!(reduce_mod_2pi(PI), PI);
        assert!((reduce_mod_2pi(-PI) - PI).abs() < 1e-15);
        assert!(angular_distance(0.1, TAU + 0.1) < 1e-14);
        assert!((angular_distance(-3.0, 3.0) - (TAU - 6.0)).abs() < 1e-14);
    }

    #[test]
    fn sum_identity_by_construction() {
        let t = PhaseTriple::from_parts(-0.5, -1.25);
        assert_eq!(t.total, -1.75);
        assert_eq!(t.add(&t.negated()), PhaseTriple::default());
    }
}
