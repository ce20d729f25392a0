//! Invariant suites run by `geogate verify`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geogate::dynamics::{
    analyze_cyclic_evolution, evolution_operator, propagate_bloch, propagate_spinor,
    EvolutionOptions,
};
use geogate::formulas::{
    conditional_phases, dark_state_condition_two_qubit, dark_state_frequency_single,
    single_qubit_phases, TwoQubitParams,
};
use geogate::gates::{
    build_single_qubit_gate, cnot_reference, commutator_norm, compose_cnot, gate_adjoint,
    noncommutable, rotate_field_axis, AxisRotation, GateMatrix,
};
use geogate::newton::NewtonOptions;
use geogate::phase::angular_distance;
use geogate::segment::{ControlState, RotatingFieldSegment};
use geogate::solvers::{solve_single_qubit_two_loop, SingleQubitProblem};
use geogate::spinor::{pauli_dot, SpinorState};
use geogate::Result;

use crate::config::Grid;
use crate::figures::{fig1, fig2, fig3_sweep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Phases,
    Gates,
    DarkStates,
    MultiLoop,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Phases,
        Suite::Gates,
        Suite::DarkStates,
        Suite::MultiLoop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Phases => "phases",
            Suite::Gates => "gates",
            Suite::DarkStates => "darkstates",
            Suite::MultiLoop => "multiloop",
        }
    }
}

/// Parses a suite name; `all` expands to every suite.
pub fn parse_suites(name: &str) -> std::result::Result<Vec<Suite>, String> {
    match name {
        "all" => Ok(Suite::ALL.to_vec()),
        "phases" => Ok(vec![Suite::Phases]),
        "gates" => Ok(vec![Suite::Gates]),
        "darkstates" => Ok(vec![Suite::DarkStates]),
        "multiloop" => Ok(vec![Suite::MultiLoop]),
        other => Err(format!(
            "unknown suite `{other}` (phases, gates, darkstates, multiloop, all)"
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    pub steps: usize,
    /// Phase tolerance for integration-vs-closed-form comparisons.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            steps: geogate::dynamics::DEFAULT_STEPS,
            tolerance: 1e-6,
            seed: 20_050_101,
        }
    }
}

impl VerifySettings {
    fn evolution(&self) -> EvolutionOptions {
        EvolutionOptions::with_steps(self.steps)
    }
}

/// One invariant: the worst observed value against its limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    /// `value < limit`, or `value >= limit` for lower bounds.
    pub lower_bound: bool,
}

impl Check {
    fn upper(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            lower_bound: false,
        }
    }

    fn lower(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            lower_bound: true,
        }
    }

    pub fn passed(&self) -> bool {
        if self.lower_bound {
            self.value >= self.limit
        } else {
            self.value < self.limit
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let relation = if self.lower_bound { "min" } else { "max" };
        write!(
            f,
            "{:<52} {} {:.3e} (limit {:.1e}) {}",
            self.name,
            relation,
            self.value,
            self.limit,
            if self.passed() { "ok" } else { "FAILED" }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// `PASS <suite> <n>/<n>` or `FAIL <suite> <k>/<n>`.
    pub fn summary(&self) -> String {
        let ok = self.checks.iter().filter(|c| c.passed()).count();
        format!(
            "{} {} {}/{}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite.name(),
            ok,
            self.checks.len()
        )
    }
}

pub fn run_suite(suite: Suite, settings: &VerifySettings) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Phases => phases_suite(settings)?,
        Suite::Gates => gates_suite(settings)?,
        Suite::DarkStates => darkstates_suite(settings)?,
        Suite::MultiLoop => multiloop_suite(settings)?,
    };
    Ok(SuiteReport { suite, checks })
}

fn random_segments(rng: &mut ChaCha8Rng, count: usize) -> Vec<RotatingFieldSegment> {
    (0..count)
        .map(|_| {
            let w0 = rng.random_range(0.1..=10.0);
            let w1 = rng.random_range(0.1..=10.0);
            let w = rng.random_range(0.1..=10.0);
            RotatingFieldSegment::new(w0, w1, w).expect("positive parameters")
        })
        .collect()
}

fn phases_suite(settings: &VerifySettings) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let segments = random_segments(&mut rng, 100);
    let options = settings.evolution();

    let mut oracle: f64 = 0.0;
    let mut overlap: f64 = 0.0;
    let mut sum_identity: f64 = 0.0;
    for seg in &segments {
        let closed = single_qubit_phases(seg.omega0, seg.omega1, seg.omega)?;
        let numeric = analyze_cyclic_evolution(seg, &seg.cyclic_state()?, &options)?;
        oracle = oracle.max(numeric.phases.max_abs_diff(&closed));
        overlap = overlap.max(numeric.total_phase_mismatch());
        sum_identity = sum_identity.max((closed.total - closed.geometric - closed.dynamic).abs());
        let j = rng.random_range(0.0..=2.0);
        for delta in ControlState::BOTH {
            let c = conditional_phases(&TwoQubitParams {
                omega0: seg.omega0,
                omega1: seg.omega1,
                omega: seg.omega,
                j,
                delta,
            });
            if let Ok(c) = c {
                sum_identity = sum_identity.max((c.total - c.geometric - c.dynamic).abs());
            }
        }
    }

    let mut antipodal: f64 = 0.0;
    let mut norm: f64 = 0.0;
    let mut bloch: f64 = 0.0;
    for seg in segments.iter().take(20) {
        let chi = seg.chi()?;
        let plus = analyze_cyclic_evolution(seg, &SpinorState::cyclic_plus(chi), &options)?;
        let minus = analyze_cyclic_evolution(seg, &SpinorState::cyclic_minus(chi), &options)?;
        // Opposite modulo 2π: the antipodal circle encloses the complementary cap.
        let mirrored = minus.phases.negated();
        antipodal = antipodal
            .max(angular_distance(plus.phases.geometric, mirrored.geometric))
            .max((plus.phases.dynamic - mirrored.dynamic).abs())
            .max(angular_distance(plus.phases.total, mirrored.total));

        let start =
            SpinorState::from_bloch_angles(rng.random_range(0.0..PI), rng.random_range(0.0..TAU));
        let traj = propagate_spinor(seg, &start, settings.steps)?;
        let path = propagate_bloch(seg, &start.bloch_vector(), settings.steps)?;
        for (psi, n) in traj.states.iter().zip(&path.points) {
            norm = norm.max((psi.norm_sqr().sqrt() - 1.0).abs());
            bloch = bloch.max((psi.bloch_vector() - n).norm());
        }
    }

    // Fourth-order convergence of the total phase at a fixed test point.
    let seg = RotatingFieldSegment::new(1.3, 0.8, 0.9)?;
    let exact = single_qubit_phases(seg.omega0, seg.omega1, seg.omega)?.total;
    let error_at = |steps: usize| -> Result<f64> {
        let traj = propagate_spinor(&seg, &seg.cyclic_state()?, steps)?;
        Ok(angular_distance(traj.overlap().arg(), exact))
    };
    let ratio = error_at(100)? / error_at(200)?;

    Ok(vec![
        Check::upper(
            "closed form vs integration, 100 random points",
            oracle,
            settings.tolerance,
        ),
        Check::upper("sum identity of closed forms", sum_identity, 1e-12),
        Check::upper(
            "total phase vs overlap argument (mod 2pi)",
            overlap,
            settings.tolerance,
        ),
        Check::upper(
            "antipodal pair: triples opposite (mod 2pi)",
            antipodal,
            settings.tolerance,
        ),
        Check::upper("norm conservation", norm, 1e-9),
        Check::upper("spinor vs Bloch propagation", bloch, 1e-7),
        Check::lower("error ratio when the step is halved", ratio, 8.0),
    ])
}

fn gates_suite(settings: &VerifySettings) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed ^ 0x6A7E);
    let cnot = compose_cnot().max_abs_diff(&cnot_reference());

    let angles: Vec<f64> = (0..20).map(|k| k as f64 * TAU / 20.0).collect();
    let gates: Vec<Vec<GateMatrix>> = angles
        .iter()
        .map(|&chi| {
            angles
                .iter()
                .map(|&g| build_single_qubit_gate(chi, g))
                .collect()
        })
        .collect();
    let mut disagreements = 0usize;
    for (i1, &c1) in angles.iter().enumerate() {
        for (k1, &g1) in angles.iter().enumerate() {
            for (i2, &c2) in angles.iter().enumerate() {
                for (k2, &g2) in angles.iter().enumerate() {
                    let brute = commutator_norm(&gates[i1][k1], &gates[i2][k2]) > 1e-9;
                    if brute != noncommutable(c1, g1, c2, g2) {
                        disagreements += 1;
                    }
                }
            }
        }
    }

    let mut unitary: f64 = 0.0;
    let mut adjoint: f64 = 0.0;
    let mut su2_so3: f64 = 0.0;
    for _ in 0..200 {
        let chi = rng.random_range(-PI..PI);
        let gamma = rng.random_range(-PI..PI);
        let u = build_single_qubit_gate(chi, gamma);
        unitary = unitary
            .max(u.unitarity_defect())
            .max((u.determinant() - 1.0).norm());
        adjoint = adjoint.max(gate_adjoint(chi, gamma).max_abs_diff(&u.adjoint()));

        let rot = AxisRotation::new(chi);
        let n = nalgebra::Vector3::new(rng.random(), rng.random(), rng.random::<f64>()).normalize();
        let lhs = rot.su2() * pauli_dot(&n) * rot.su2().adjoint();
        su2_so3 = su2_so3.max((lhs - pauli_dot(&(rot.so3() * n))).norm());
    }

    let options = settings.evolution();
    let mut simulated: f64 = 0.0;
    let mut rotation: f64 = 0.0;
    for seg in random_segments(&mut rng, 20) {
        let evo = analyze_cyclic_evolution(&seg, &seg.cyclic_state()?, &options)?;
        let built = build_single_qubit_gate(seg.chi()?, evo.overlap_phase);
        let u = GateMatrix::from_matrix2(&evolution_operator(&seg, settings.steps)?)?;
        simulated = simulated.max(u.max_abs_diff(&built));

        let rotated = rotate_field_axis(&seg, rng.random_range(0.0..PI))?;
        let turned = analyze_cyclic_evolution(&rotated, &rotated.cyclic_state()?, &options)?;
        rotation = rotation.max(turned.phases.max_abs_diff(&evo.phases));
    }

    Ok(vec![
        Check::upper("CNOT composition vs diag(I, i sigma_x)", cnot, 1e-12),
        Check::upper(
            "noncommutability disagreements on 20^4 grid",
            disagreements as f64,
            0.5,
        ),
        Check::upper("unitarity and det = 1", unitary, 1e-10),
        Check::upper("adjoint law", adjoint, 1e-12),
        Check::upper("SU(2)/SO(3) axis rotation consistency", su2_so3, 1e-12),
        Check::upper("simulated evolution operator vs gate", simulated, 1e-5),
        Check::upper(
            "phases under field-axis rotation",
            rotation,
            settings.tolerance,
        ),
    ])
}

fn darkstates_suite(settings: &VerifySettings) -> Result<Vec<Check>> {
    let options = settings.evolution();
    let mut single_energy: f64 = 0.0;
    let mut single_dynamic: f64 = 0.0;
    for k in 0..20 {
        let omega1 = 0.25 + 0.5 * k as f64;
        let omega = dark_state_frequency_single(1.0, omega1)?;
        let seg = RotatingFieldSegment::new(1.0, omega1, omega)?;
        let evo = analyze_cyclic_evolution(&seg, &seg.cyclic_state()?, &options)?;
        let peak = evo
            .trajectory
            .energies()
            .iter()
            .fold(0.0f64, |m, e| m.max(e.abs()));
        single_energy = single_energy.max(peak);
        single_dynamic = single_dynamic.max(evo.phases.dynamic.abs());
    }

    let mut pair_energy: f64 = 0.0;
    let mut pair_dynamic: f64 = 0.0;
    for k in 0..20 {
        let ratio = 1.05 + (10.0 - 1.05) * k as f64 / 19.0;
        let dark = dark_state_condition_two_qubit(ratio, 1.0)?;
        for delta in ControlState::BOTH {
            let seg = RotatingFieldSegment::new(dark.omega0, ratio, dark.omega)?
                .with_coupling(1.0, delta);
            let evo = analyze_cyclic_evolution(&seg, &seg.cyclic_state()?, &options)?;
            let peak = evo
                .trajectory
                .energies()
                .iter()
                .fold(0.0f64, |m, e| m.max(e.abs()));
            pair_energy = pair_energy.max(peak);
            pair_dynamic = pair_dynamic.max(evo.phases.dynamic.abs());
        }
    }

    let f1 = fig1(&Grid(vec![0.0, 1.0, 1e9]))?
        .table
        .numbers("gamma_g_over_pi");
    let fig1_err = (f1[0].unwrap_or(f64::NAN) + 2.0)
        .abs()
        .max((f1[1].unwrap_or(f64::NAN) + 1.0 + 1.0 / 2f64.sqrt()).abs())
        .max((f1[2].unwrap_or(f64::NAN) + 1.0).abs());

    let grid = Grid::linspace(1.05, 10.0, 100);
    let f2 = fig2(&grid)?.table;
    let g0 = f2.numbers("gamma0_over_pi");
    let g1 = f2.numbers("gamma1_over_pi");
    let mut separation = f64::INFINITY;
    let mut eq_err: f64 = 0.0;
    for ((ratio, a), b) in grid.0.iter().zip(&g0).zip(&g1) {
        let (a, b) = (a.unwrap_or(f64::NAN) * PI, b.unwrap_or(f64::NAN) * PI);
        separation = separation.min(angular_distance(a, b));
        // -π(1 - (ω₁^δ - ω)/Ω^δ) with ω = 2ω₁, ω₀² = ω₁² - 1.
        let w0 = (ratio * ratio - 1.0).sqrt();
        for (value, shift) in [(a, -1.0), (b, 1.0)] {
            let detuning = ratio + shift - 2.0 * ratio;
            let expected = -PI * (1.0 - detuning / w0.hypot(detuning));
            eq_err = eq_err.max((value - expected).abs());
        }
    }

    Ok(vec![
        Check::upper(
            "single-qubit dark manifold: peak |<H>|",
            single_energy,
            settings.tolerance,
        ),
        Check::upper(
            "single-qubit dark manifold: |gamma_d|",
            single_dynamic,
            settings.tolerance,
        ),
        Check::upper(
            "two-qubit dark manifold: peak |<H>|",
            pair_energy,
            settings.tolerance,
        ),
        Check::upper(
            "two-qubit dark manifold: |gamma_d|",
            pair_dynamic,
            settings.tolerance,
        ),
        Check::upper("fig1 endpoints and ratio-1 value", fig1_err, 1e-9),
        Check::lower(
            "fig2 conditional phase separation (mod 2pi)",
            separation,
            1e-3,
        ),
        Check::upper("fig2 vs conditional geometric phase", eq_err, 1e-10),
    ])
}

fn multiloop_suite(settings: &VerifySettings) -> Result<Vec<Check>> {
    let options = settings.evolution();
    let newton = NewtonOptions::default();

    let mut single_residual: f64 = 0.0;
    let mut single_dynamic: f64 = 0.0;
    let mut single_geometric: f64 = 0.0;
    let mut closure: f64 = 0.0;
    for omega0 in [0.6, 0.7, 0.8] {
        let problem = SingleQubitProblem::with_unit_longitudinal(0.5, omega0);
        let sol = solve_single_qubit_two_loop(&problem, None, &newton)?;
        let phases = sol.plan.integrate(None, &options)?;
        single_residual = single_residual.max(sol.max_residual());
        single_dynamic = single_dynamic.max(phases.total.dynamic.abs());
        single_geometric = single_geometric.max((phases.total.geometric + 0.5 * PI).abs());
        closure = closure.max(phases.closure_defect);
    }

    let points = fig3_sweep(&Grid::linspace(0.5, 6.0, 12))?;
    let converged = points.iter().filter(|p| p.result.is_ok()).count();
    let mut pair_residual: f64 = 0.0;
    let mut pair_dynamic: f64 = 0.0;
    let mut separation = f64::INFINITY;
    for p in &points {
        let Ok(sol) = &p.result else { continue };
        pair_residual = pair_residual.max(sol.max_residual());
        separation = separation.min(angular_distance(
            sol.gamma_geometric[0],
            sol.gamma_geometric[1],
        ));
        for delta in ControlState::BOTH {
            let phases = sol.plan.integrate(Some(delta), &options)?;
            pair_dynamic = pair_dynamic.max(phases.total.dynamic.abs());
            closure = closure.max(phases.closure_defect);
        }
    }

    Ok(vec![
        Check::upper("single-qubit two-loop residuals", single_residual, 1e-10),
        Check::upper(
            "single-qubit two-loop integrated |gamma_d|",
            single_dynamic,
            settings.tolerance,
        ),
        Check::upper(
            "single-qubit two-loop gamma_g + pi/2",
            single_geometric,
            1e-5,
        ),
        Check::lower(
            "two-qubit sweep converged fraction",
            converged as f64 / points.len() as f64,
            0.9,
        ),
        Check::upper("two-qubit two-loop residuals", pair_residual, 1e-9),
        Check::upper(
            "two-qubit two-loop integrated |gamma_d|",
            pair_dynamic,
            settings.tolerance,
        ),
        Check::lower("two-qubit conditional phase separation", separation, 1e-3),
        Check::upper("loop closure defect", closure, 1e-6),
    ])
}
