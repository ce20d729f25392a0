//! Two-loop field designs whose dynamic phases cancel while the geometric
//! phases add up to a prescribed value.
//!
//! Loop 2 is the reversed field `-(ω₀′ cos ω′t, ω₀′ sin ω′t, ω₁′)`, tilted about
//! `ŷ` so that its cyclic state is the one loop 1 ends in. All frequencies
//! stay positive; the reversal lives in [`RotatingFieldSegment::reversed`].

use std::f64::consts::PI;

use crate::dynamics::{analyze_cyclic_evolution, EvolutionOptions};
use crate::error::{Error, Result};
use crate::formulas::closed_form_phases;
use crate::newton::{newton_solve, NewtonOptions};
use crate::phase::{angular_distance, PhaseTriple};
use crate::segment::{ControlState, RotatingFieldSegment};

/// Largest `|η⁰ - η¹|` accepted by [`eta_angle`].
pub const ETA_TOLERANCE: f64 = 1e-9;
/// Separation (mod 2π) below which two conditional phases count as equal.
pub const NONTRIVIAL_PHASE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanKind {
    SingleQubit,
    TwoQubit,
}

/// Two consecutive loops on one qubit (the target, for two-qubit plans).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiLoopPlan {
    pub loop1: RotatingFieldSegment,
    pub loop2: RotatingFieldSegment,
    pub kind: PlanKind,
    /// Coupling strength; zero for single-qubit plans.
    pub j: f64,
    /// Control-rotation angle; zero for single-qubit plans.
    pub eta: f64,
}

/// Per-loop and summed phases of a two-loop evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopPhases {
    pub loop1: PhaseTriple,
    pub loop2: PhaseTriple,
    pub total: PhaseTriple,
    /// `1 - |⟨ψ₂|ψ(τ)⟩|` between the state loop 1 ends in and loop 2's
    /// cyclic state.
    pub closure_defect: f64,
}

impl MultiLoopPlan {
    /// Loop 1 `(ω₀, ω₁, ω)`, loop 2 reversed `(ω₀′, ω₁′, ω)` tilted by
    /// `α - α′`, where `α`, `α′` are the two loops' own cyclic angles.
    pub fn single_qubit(
        omega: f64,
        omega0: f64,
        omega1: f64,
        omega0p: f64,
        omega1p: f64,
    ) -> Result<Self> {
        let loop1 = RotatingFieldSegment::new(omega0, omega1, omega)?;
        let loop2 = RotatingFieldSegment::new(omega0p, omega1p, omega)?.reversed();
        let tilt = loop1.body_chi()? - loop2.body_chi()?;
        Ok(Self {
            loop1,
            loop2: loop2.with_axis_tilt(tilt),
            kind: PlanKind::SingleQubit,
            j: 0.0,
            eta: 0.0,
        })
    }

    /// Target loops of the two-qubit scheme; loop 2 is tilted by the
    /// δ-independent angle `η`.
    pub fn two_qubit(params: &TwoLoopParams) -> Result<Self> {
        let eta = eta_angle(params)?;
        let loop1 = RotatingFieldSegment::new(params.omega0, params.omega1, params.omega)?;
        let loop2 = RotatingFieldSegment::new(params.omega0_p, params.omega1_p, params.omega_p)?
            .reversed()
            .with_axis_tilt(eta);
        Ok(Self {
            loop1,
            loop2,
            kind: PlanKind::TwoQubit,
            j: params.j,
            eta,
        })
    }

    /// The loops seen by the (target) qubit. Two-qubit plans need the control
    /// state; the coupling shift `(2δ-1)J` is applied to both loops, the
    /// second one reversed together with its drive.
    pub fn effective_loops(
        &self,
        control: Option<ControlState>,
    ) -> Result<(RotatingFieldSegment, RotatingFieldSegment)> {
        match (self.kind, control) {
            (PlanKind::SingleQubit, None) => Ok((self.loop1, self.loop2)),
            (PlanKind::TwoQubit, Some(delta)) => Ok((
                self.loop1.with_coupling(self.j, delta),
                self.loop2.with_coupling(self.j, delta),
            )),
            (PlanKind::SingleQubit, Some(_)) => Err(Error::InvalidParameter(
                "single-qubit plan takes no control state".into(),
            )),
            (PlanKind::TwoQubit, None) => Err(Error::InvalidParameter(
                "two-qubit plan needs a control state".into(),
            )),
        }
    }

    /// Phases from the closed forms.
    pub fn closed_form(&self, control: Option<ControlState>) -> Result<LoopPhases> {
        let (l1, l2) = self.effective_loops(control)?;
        let p1 = closed_form_phases(&l1)?;
        let p2 = closed_form_phases(&l2)?;
        let gap = 0.5 * (l2.chi()? - l1.chi()?);
        Ok(LoopPhases {
            loop1: p1,
            loop2: p2,
            total: p1.add(&p2),
            closure_defect: 1.0 - gap.cos().abs(),
        })
    }

    /// Phases from numerical propagation: loop 1 starts in its cyclic state
    /// and loop 2 continues from wherever loop 1 ended.
    pub fn integrate(
        &self,
        control: Option<ControlState>,
        options: &EvolutionOptions,
    ) -> Result<LoopPhases> {
        let (l1, l2) = self.effective_loops(control)?;
        let first = analyze_cyclic_evolution(&l1, &l1.cyclic_state()?, options)?;
        let handover = *first.trajectory.final_state();
        let closure_defect = 1.0 - l2.cyclic_state()?.inner(&handover).norm();
        let second = analyze_cyclic_evolution(&l2, &handover, options)?;
        Ok(LoopPhases {
            loop1: first.phases,
            loop2: second.phases,
            total: first.phases.add(&second.phases),
            closure_defect,
        })
    }
}

/// A solved two-loop design.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSolution {
    pub plan: MultiLoopPlan,
    /// Absolute residual of each constraint equation.
    pub residuals: Vec<f64>,
    /// Achieved geometric phase: `[-Γπ]` for single-qubit plans,
    /// `[γ_g⁰, γ_g¹]` for two-qubit plans.
    pub gamma_geometric: Vec<f64>,
    pub iterations: usize,
}

impl SolverSolution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Achieved `Γ` (or `Γ⁰, Γ¹`).
    pub fn gamma_coefficients(&self) -> Vec<f64> {
        self.gamma_geometric.iter().map(|g| -g / PI).collect()
    }

    /// Two-qubit plans: `γ_g¹ ≠ γ_g⁰` modulo 2π.
    pub fn nontrivial(&self) -> bool {
        match self.gamma_geometric.as_slice() {
            [g0, g1] => angular_distance(*g0, *g1) > NONTRIVIAL_PHASE_TOLERANCE,
            _ => false,
        }
    }
}

fn positive_finite(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_finite() && *v > 0.0)
}

fn hypot_nonzero(a: f64, b: f64, what: &str) -> Result<f64> {
    let h = a.hypot(b);
    if h == 0.0 || !h.is_finite() {
        return Err(Error::Degenerate(format!("{what} = 0")));
    }
    Ok(h)
}

// ---------------------------------------------------------------------------
// Single-qubit scheme

/// `(r1, r2)`: the geometric-phase target and the dynamic-phase balance,
///
/// ```text
/// r1 = (ω₁ - ω)/Ω + (ω₁′ + ω)/Ω′ - (2 - Γ)
/// r2 = (ω₀² + ω₁² - ωω₁)/(ωΩ) - (ω₀′² + ω₁′² + ωω₁′)/(ωΩ′)
/// ```
pub fn single_qubit_residuals(
    omega: f64,
    omega0: f64,
    omega0p: f64,
    omega1: f64,
    omega1p: f64,
    gamma: f64,
) -> Result<[f64; 2]> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain(format!("ω must be positive, got {omega}")));
    }
    let big = hypot_nonzero(omega0, omega1 - omega, "Ω")?;
    let big_p = hypot_nonzero(omega0p, omega1p + omega, "Ω′")?;
    let r1 = (omega1 - omega) / big + (omega1p + omega) / big_p - (2.0 - gamma);
    let r2 = (omega0 * omega0 + omega1 * omega1 - omega * omega1) / (omega * big)
        - (omega0p * omega0p + omega1p * omega1p + omega * omega1p) / (omega * big_p);
    Ok([r1, r2])
}

/// Which of `{ω, ω₀, ω₀′}` the caller fixes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pin {
    Omega(f64),
    Omega0(f64),
    Omega0Prime(f64),
}

impl Pin {
    pub fn value(&self) -> f64 {
        match *self {
            Pin::Omega(v) | Pin::Omega0(v) | Pin::Omega0Prime(v) => v,
        }
    }

    pub fn with_value(&self, v: f64) -> Self {
        match self {
            Pin::Omega(_) => Pin::Omega(v),
            Pin::Omega0(_) => Pin::Omega0(v),
            Pin::Omega0Prime(_) => Pin::Omega0Prime(v),
        }
    }

    /// `(ω, ω₀, ω₀′)` from the pinned value and the two free unknowns, in
    /// that order with the pinned slot skipped.
    pub fn assemble(&self, free: &[f64]) -> [f64; 3] {
        match *self {
            Pin::Omega(v) => [v, free[0], free[1]],
            Pin::Omega0(v) => [free[0], v, free[1]],
            Pin::Omega0Prime(v) => [free[0], free[1], v],
        }
    }

    pub fn free_part(&self, full: &[f64; 3]) -> [f64; 2] {
        match self {
            Pin::Omega(_) => [full[1], full[2]],
            Pin::Omega0(_) => [full[0], full[2]],
            Pin::Omega0Prime(_) => [full[0], full[1]],
        }
    }
}

/// Target phase `-Γπ` with `ω₁`, `ω₁′` and one pinned unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitProblem {
    pub gamma: f64,
    pub omega1: f64,
    pub omega1p: f64,
    pub pin: Pin,
}

impl SingleQubitProblem {
    /// `ω₁ = ω₁′ = 1`, `ω₀` pinned.
    pub fn with_unit_longitudinal(gamma: f64, omega0: f64) -> Self {
        Self {
            gamma,
            omega1: 1.0,
            omega1p: 1.0,
            pin: Pin::Omega0(omega0),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < 2.0) {
            return Err(Error::Domain(format!(
                "target Γ must lie in (0, 2), got {}",
                self.gamma
            )));
        }
        if !positive_finite(&[self.omega1, self.omega1p, self.pin.value()]) {
            return Err(Error::Domain(
                "ω₁, ω₁′ and the pinned unknown must be positive".into(),
            ));
        }
        Ok(())
    }

    fn residuals(&self, free: &[f64]) -> Result<Vec<f64>> {
        let [w, w0, w0p] = self.pin.assemble(free);
        single_qubit_residuals(w, w0, w0p, self.omega1, self.omega1p, self.gamma).map(Vec::from)
    }

    /// Best few points of a coarse grid over the free unknowns in `(0, 4]`.
    fn grid_seeds(&self) -> Vec<[f64; 2]> {
        let n = 80;
        let step = 4.0 / n as f64;
        let mut scored = Vec::new();
        for a in 1..=n {
            for b in 1..=n {
                let free = [a as f64 * step, b as f64 * step];
                if let Ok(r) = self.residuals(&free) {
                    scored.push((r[0].hypot(r[1]), free));
                }
            }
        }
        scored.sort_by(|x, y| x.0.total_cmp(&y.0));
        scored.into_iter().take(12).map(|(_, f)| f).collect()
    }
}

/// Solves the single-qubit two-loop equations for the two free unknowns.
///
/// Without a seed, the best points of a coarse grid search are tried in
/// turn.
pub fn solve_single_qubit_two_loop(
    problem: &SingleQubitProblem,
    seed: Option<[f64; 2]>,
    options: &NewtonOptions,
) -> Result<SolverSolution> {
    problem.validate()?;
    let seeds = match seed {
        Some(s) => vec![s],
        None => problem.grid_seeds(),
    };
    let mut last_error = Error::NoConvergence {
        iterations: 0,
        residual: f64::INFINITY,
    };
    for s in seeds {
        match newton_solve(
            |x: &[f64]| problem.residuals(x),
            &s,
            |x: &[f64]| positive_finite(x),
            options,
        ) {
            Ok(outcome) => return single_solution(problem, &outcome.x, outcome.iterations),
            Err(e) => last_error = e,
        }
    }
    Err(last_error)
}

fn single_solution(
    problem: &SingleQubitProblem,
    free: &[f64],
    iterations: usize,
) -> Result<SolverSolution> {
    let [w, w0, w0p] = problem.pin.assemble(free);
    let r = single_qubit_residuals(w, w0, w0p, problem.omega1, problem.omega1p, problem.gamma)?;
    let plan = MultiLoopPlan::single_qubit(w, w0, problem.omega1, w0p, problem.omega1p)?;
    let phases = plan.closed_form(None)?;
    Ok(SolverSolution {
        plan,
        residuals: r.iter().map(|v| v.abs()).collect(),
        gamma_geometric: vec![phases.total.geometric],
        iterations,
    })
}

/// One point of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// The swept value (pinned unknown, or `ω` for two-qubit sweeps).
    pub parameter: f64,
    pub result: Result<SolverSolution>,
    /// Other solutions `(ω′, ω₀′, ω₁′)` (or free unknowns) found by a grid
    /// search at this point, excluding the reported one.
    pub alternatives: Vec<Vec<f64>>,
}

/// Continuation over pinned values: each point is seeded by the previous
/// solution and falls back to a grid search when that fails.
pub fn sweep_single_qubit(
    template: &SingleQubitProblem,
    pinned: &[f64],
    options: &NewtonOptions,
) -> Vec<SweepPoint> {
    let mut previous: Option<[f64; 2]> = None;
    pinned
        .iter()
        .map(|&v| {
            let problem = SingleQubitProblem {
                pin: template.pin.with_value(v),
                ..*template
            };
            let mut result = Err(Error::NoConvergence {
                iterations: 0,
                residual: f64::INFINITY,
            });
            if let Some(seed) = previous {
                result = solve_single_qubit_two_loop(&problem, Some(seed), options);
            }
            if result.is_err() {
                result = solve_single_qubit_two_loop(&problem, None, options);
            }
            previous = result.as_ref().ok().map(|s| {
                let full = [s.plan.loop1.omega, s.plan.loop1.omega0, s.plan.loop2.omega0];
                problem.pin.free_part(&full)
            });
            SweepPoint {
                parameter: v,
                result,
                alternatives: Vec::new(),
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Two-qubit scheme

/// Loop-1 drive `(ω, ω₀, ω₁)`, loop-2 drive `(ω′, ω₀′, ω₁′)` and coupling `J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLoopParams {
    pub omega: f64,
    pub omega0: f64,
    pub omega1: f64,
    pub omega_p: f64,
    pub omega0_p: f64,
    pub omega1_p: f64,
    pub j: f64,
}

impl TwoLoopParams {
    pub fn effective_omega1(&self, delta: ControlState) -> f64 {
        self.omega1 + delta.sign() * self.j
    }

    pub fn effective_omega1_p(&self, delta: ControlState) -> f64 {
        self.omega1_p + delta.sign() * self.j
    }

    fn check(&self) -> Result<()> {
        let all = [
            self.omega,
            self.omega0,
            self.omega1,
            self.omega_p,
            self.omega0_p,
            self.omega1_p,
            self.j,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite parameter".into()));
        }
        if self.omega <= 0.0 || self.omega_p <= 0.0 {
            return Err(Error::Domain("rotation rates must be positive".into()));
        }
        // Loop 2's reversal lives in the segment flag, not in signed frequencies.
        if all[1..].iter().any(|v| *v < 0.0) {
            return Err(Error::Domain(
                "frequencies and coupling must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// `(Ω^δ, Ω′^δ)`.
    pub fn rabi(&self, delta: ControlState) -> Result<(f64, f64)> {
        Ok((
            hypot_nonzero(
                self.omega0,
                self.effective_omega1(delta) - self.omega,
                "Ω^δ",
            )?,
            hypot_nonzero(
                self.omega0_p,
                self.effective_omega1_p(delta) + self.omega_p,
                "Ω′^δ",
            )?,
        ))
    }

    /// `Γ^δ = 2 - (ω₁^δ - ω)/Ω^δ - (ω₁′^δ + ω′)/Ω′^δ`.
    pub fn gamma_coefficient(&self, delta: ControlState) -> Result<f64> {
        self.check()?;
        let (big, big_p) = self.rabi(delta)?;
        Ok(2.0
            - (self.effective_omega1(delta) - self.omega) / big
            - (self.effective_omega1_p(delta) + self.omega_p) / big_p)
    }

    fn with_unknowns(&self, x: &[f64]) -> Self {
        Self {
            omega_p: x[0],
            omega0_p: x[1],
            omega1_p: x[2],
            ..*self
        }
    }
}

/// `(r0, r1, r2)`: δ-independence of `η` with cleared denominators, and
/// the dynamic-phase balance for `δ = 0` and `δ = 1`:
///
/// ```text
/// r0 = ω₀[(ω₁′ + ω′)² - J² + ω₀′²] - ω₀′[(ω₁ - ω)² - J² + ω₀²]
/// r_{1+δ} = (ω₀² + ω₁^δ(ω₁^δ - ω))/(ωΩ^δ) - (ω₀′² + ω₁′^δ(ω₁′^δ + ω′))/(ω′Ω′^δ)
/// ```
///
/// `r0 = 0` is equivalent to `tan(α¹ - α⁰) = tan(α′¹ - α′⁰)` for the cyclic
/// angles of the two loops.
pub fn two_qubit_residuals(p: &TwoLoopParams) -> Result<[f64; 3]> {
    p.check()?;
    let j2 = p.j * p.j;
    let r0 = p.omega0 * ((p.omega1_p + p.omega_p).powi(2) - j2 + p.omega0_p * p.omega0_p)
        - p.omega0_p * ((p.omega1 - p.omega).powi(2) - j2 + p.omega0 * p.omega0);
    let mut out = [r0, 0.0, 0.0];
    for delta in ControlState::BOTH {
        let (big, big_p) = p.rabi(delta)?;
        let w1 = p.effective_omega1(delta);
        let w1p = p.effective_omega1_p(delta);
        out[1 + delta.index()] = (p.omega0 * p.omega0 + w1 * (w1 - p.omega)) / (p.omega * big)
            - (p.omega0_p * p.omega0_p + w1p * (w1p + p.omega_p)) / (p.omega_p * big_p);
    }
    Ok(out)
}

/// The δ-independence constraint without the `ω₀²`, `ω₀′²` terms,
/// `ω₀[(ω₁′ + ω′)² - J²] - ω₀′[(ω₁ - ω)² - J²]`. Its zeros do not make `η`
/// δ-independent; kept for comparison only.
pub fn reduced_eta_constraint(p: &TwoLoopParams) -> f64 {
    let j2 = p.j * p.j;
    p.omega0 * ((p.omega1_p + p.omega_p).powi(2) - j2)
        - p.omega0_p * ((p.omega1 - p.omega).powi(2) - j2)
}

/// `η^δ = α^δ - α′^δ` for one control state, with two-argument arctangents.
pub fn eta_for(p: &TwoLoopParams, delta: ControlState) -> Result<f64> {
    p.check()?;
    p.rabi(delta)?;
    Ok(p.omega0.atan2(p.effective_omega1(delta) - p.omega)
        - p.omega0_p.atan2(p.effective_omega1_p(delta) + p.omega_p))
}

/// The control-rotation angle `η`, required to be the same for both control
/// states within [`ETA_TOLERANCE`].
pub fn eta_angle(p: &TwoLoopParams) -> Result<f64> {
    let eta0 = eta_for(p, ControlState::Zero)?;
    let eta1 = eta_for(p, ControlState::One)?;
    let spread = angular_distance(eta0, eta1);
    if spread > ETA_TOLERANCE {
        return Err(Error::ConstraintViolated(format!(
            "η depends on the control state (η⁰ = {eta0:.9}, η¹ = {eta1:.9})"
        )));
    }
    Ok(0.5 * (eta0 + eta1))
}

fn two_qubit_solution(p: &TwoLoopParams, iterations: usize) -> Result<SolverSolution> {
    let r = two_qubit_residuals(p)?;
    let plan = MultiLoopPlan::two_qubit(p)?;
    let mut gamma_geometric = Vec::with_capacity(2);
    for delta in ControlState::BOTH {
        gamma_geometric.push(plan.closed_form(Some(delta))?.total.geometric);
    }
    Ok(SolverSolution {
        plan,
        residuals: r.iter().map(|v| v.abs()).collect(),
        gamma_geometric,
        iterations,
    })
}

fn scaled_two_qubit_residual(p: &TwoLoopParams) -> Option<f64> {
    let r = two_qubit_residuals(p).ok()?;
    let j2 = p.j * p.j;
    let scale = p.omega0 * ((p.omega1_p + p.omega_p).powi(2) + j2 + p.omega0_p.powi(2))
        + p.omega0_p * ((p.omega1 - p.omega).powi(2) + j2 + p.omega0.powi(2));
    Some(((r[0] / scale).powi(2) + r[1] * r[1] + r[2] * r[2]).sqrt())
}

fn two_qubit_grid_seeds(base: &TwoLoopParams) -> Vec<[f64; 3]> {
    let n = 40;
    let upper = 2.0 * base.omega0.max(base.omega1).max(base.omega).max(1.0);
    let step = upper / n as f64;
    let mut scored = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                let x = [a as f64 * step, b as f64 * step, c as f64 * step];
                if let Some(s) = scaled_two_qubit_residual(&base.with_unknowns(&x)) {
                    scored.push((s, x));
                }
            }
        }
    }
    scored.sort_by(|x, y| x.0.total_cmp(&y.0));
    scored.into_iter().take(16).map(|(_, x)| x).collect()
}

fn newton_two_qubit(
    base: &TwoLoopParams,
    seed: &[f64; 3],
    options: &NewtonOptions,
) -> Result<SolverSolution> {
    let outcome = newton_solve(
        |x: &[f64]| two_qubit_residuals(&base.with_unknowns(x)).map(Vec::from),
        seed,
        |x: &[f64]| positive_finite(x),
        options,
    )?;
    two_qubit_solution(&base.with_unknowns(&outcome.x), outcome.iterations)
}

/// Solves for `(ω′, ω₀′, ω₁′)` at one loop-1 drive. With no seed, a grid
/// search over `(0, 2·max(ω₀, ω₁, ω)]³` supplies starting points; every
/// distinct solution it reaches besides the first is returned as an
/// alternative branch.
pub fn solve_two_qubit_point(
    omega0: f64,
    omega1: f64,
    j: f64,
    omega: f64,
    seed: Option<[f64; 3]>,
    options: &NewtonOptions,
) -> Result<(SolverSolution, Vec<Vec<f64>>)> {
    let base = TwoLoopParams {
        omega,
        omega0,
        omega1,
        omega_p: 1.0,
        omega0_p: 1.0,
        omega1_p: 1.0,
        j,
    };
    validate_two_qubit_inputs(omega0, omega1, j)?;
    base.check()?;
    for delta in ControlState::BOTH {
        hypot_nonzero(omega0, base.effective_omega1(delta) - omega, "Ω^δ")?;
    }
    if let Some(s) = seed {
        return newton_two_qubit(&base, &s, options).map(|sol| (sol, Vec::new()));
    }
    let mut found: Vec<SolverSolution> = Vec::new();
    let mut last_error = Error::NoConvergence {
        iterations: 0,
        residual: f64::INFINITY,
    };
    for s in two_qubit_grid_seeds(&base) {
        match newton_two_qubit(&base, &s, options) {
            Ok(sol) => {
                let key = loop2_unknowns(&sol);
                let distinct = found.iter().all(|f| {
                    let k = loop2_unknowns(f);
                    k.iter()
                        .zip(&key)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                        > 1e-6
                });
                if distinct {
                    found.push(sol);
                }
            }
            Err(e) => last_error = e,
        }
    }
    if found.is_empty() {
        return Err(last_error);
    }
    let primary = found.remove(0);
    let alternatives = found.iter().map(|s| loop2_unknowns(s).to_vec()).collect();
    Ok((primary, alternatives))
}

fn loop2_unknowns(sol: &SolverSolution) -> [f64; 3] {
    let l2 = &sol.plan.loop2;
    [l2.omega, l2.omega0, l2.omega1]
}

fn validate_two_qubit_inputs(omega0: f64, omega1: f64, j: f64) -> Result<()> {
    if !(omega0.is_finite() && omega1.is_finite() && j.is_finite()) {
        return Err(Error::InvalidParameter("non-finite parameter".into()));
    }
    if omega0 <= 0.0 || omega1 <= 0.0 || j < 0.0 {
        return Err(Error::Domain("need ω₀ > 0, ω₁ > 0 and J ≥ 0".into()));
    }
    Ok(())
}

/// Sweeps `ω` over `grid` with continuation: each point is seeded by an
/// extrapolation of the previous solutions and falls back to a grid search
/// when that fails. Failures are reported per point.
pub fn solve_two_qubit_two_loop(
    omega0: f64,
    omega1: f64,
    j: f64,
    grid: &[f64],
    options: &NewtonOptions,
) -> Result<Vec<SweepPoint>> {
    validate_two_qubit_inputs(omega0, omega1, j)?;
    if let Some(bad) = grid.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::Domain(format!(
            "grid value ω = {bad} is not positive"
        )));
    }
    let mut history: Vec<(f64, [f64; 3])> = Vec::new();
    let mut points = Vec::with_capacity(grid.len());
    for &omega in grid {
        let mut attempt: Option<(SolverSolution, Vec<Vec<f64>>)> = None;
        for seed in continuation_seeds(&history, omega) {
            if let Ok(sol) = solve_two_qubit_point(omega0, omega1, j, omega, Some(seed), options) {
                attempt = Some(sol);
                break;
            }
        }
        let result = match attempt {
            Some((sol, alts)) => Ok((sol, alts)),
            None => solve_two_qubit_point(omega0, omega1, j, omega, None, options),
        };
        match result {
            Ok((sol, alternatives)) => {
                history.push((omega, loop2_unknowns(&sol)));
                points.push(SweepPoint {
                    parameter: omega,
                    result: Ok(sol),
                    alternatives,
                });
            }
            Err(e) => points.push(SweepPoint {
                parameter: omega,
                result: Err(e),
                alternatives: Vec::new(),
            }),
        }
    }
    Ok(points)
}

fn continuation_seeds(history: &[(f64, [f64; 3])], omega: f64) -> Vec<[f64; 3]> {
    let mut seeds = Vec::new();
    if let [.., (w0, s0), (w1, s1)] = history {
        let t = (omega - w1) / (w1 - w0);
        let predicted = [
            s1[0] + t * (s1[0] - s0[0]),
            s1[1] + t * (s1[1] - s0[1]),
            s1[2] + t * (s1[2] - s0[2]),
        ];
        if positive_finite(&predicted) {
            seeds.push(predicted);
        }
    }
    if let Some((_, last)) = history.last() {
        seeds.push(*last);
    }
    seeds
}
