//! Figure datasets.

use std::f64::consts::PI;

use geogate::dynamics::EvolutionOptions;
use geogate::formulas::{
    conditional_phases, dark_state_condition_two_qubit, dark_state_frequency_single,
    dark_state_geometric_phase, single_qubit_phases, TwoQubitParams,
};
use geogate::newton::NewtonOptions;
use geogate::segment::ControlState;
use geogate::solvers::{solve_two_qubit_two_loop, SweepPoint};
use geogate::{Error, Result};

use crate::config::Grid;
use crate::table::{Cell, Table};

/// Drive and coupling used for the two-loop figure.
pub const FIG3_OMEGA0: f64 = 5.0;
pub const FIG3_OMEGA1: f64 = 5.0;
pub const FIG3_J: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3a,
    Fig3b,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
        }
    }

    pub fn default_grid(self) -> Grid {
        match self {
            Figure::Fig1 => Grid::linspace(0.0, 10.0, 201),
            Figure::Fig2 => Grid::linspace(1.0, 10.0, 181),
            Figure::Fig3a | Figure::Fig3b => Grid::linspace(0.1, 6.0, 50),
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            "fig3a" => Ok(Figure::Fig3a),
            "fig3b" => Ok(Figure::Fig3b),
            other => Err(format!(
                "unknown figure `{other}` (fig1, fig2, fig3a, fig3b)"
            )),
        }
    }
}

/// A figure table and the number of rows whose computation failed.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub table: Table,
    pub failures: usize,
}

fn sorted(grid: &Grid) -> Vec<f64> {
    let mut xs = grid.0.clone();
    xs.sort_by(f64::total_cmp);
    xs
}

/// Dark-state geometric phase against `ω₁/ω₀` (with `ω₀ = 1`).
pub fn fig1(grid: &Grid) -> Result<FigureData> {
    let mut table = Table::new(&["ratio", "gamma_g_over_pi"]);
    for ratio in sorted(grid) {
        if ratio.is_nan() || ratio < 0.0 {
            return Err(Error::Domain(format!(
                "ratio must be non-negative, got {ratio}"
            )));
        }
        let gamma = if ratio == 0.0 {
            dark_state_geometric_phase(0.0)
        } else if ratio.is_infinite() {
            dark_state_geometric_phase(ratio)
        } else {
            let omega = dark_state_frequency_single(1.0, ratio)?;
            single_qubit_phases(1.0, ratio, omega)?.geometric
        };
        table.push(vec![ratio.into(), (gamma / PI).into()]);
    }
    Ok(FigureData { table, failures: 0 })
}

/// Dark-state conditional geometric phases against `ω₁/J` (with `J = 1`).
pub fn fig2(grid: &Grid) -> Result<FigureData> {
    let mut table = Table::new(&["ratio", "gamma0_over_pi", "gamma1_over_pi"]);
    for ratio in sorted(grid) {
        let dark = dark_state_condition_two_qubit(ratio, 1.0)?;
        let mut row: Vec<Cell> = vec![ratio.into()];
        for delta in ControlState::BOTH {
            let gamma = match conditional_phases(&TwoQubitParams {
                omega0: dark.omega0,
                omega1: ratio,
                omega: dark.omega,
                j: 1.0,
                delta,
            }) {
                Ok(p) => p.geometric,
                // ω₀ = 0 and ω₁¹ = ω at ratio 1; (ω₁¹ − ω)/Ω¹ → 0 from above.
                Err(Error::Degenerate(_)) if dark.boundary => -PI,
                Err(e) => return Err(e),
            };
            row.push((gamma / PI).into());
        }
        table.push(row);
    }
    Ok(FigureData { table, failures: 0 })
}

/// Runs the two-loop sweep at the figure's drive and coupling.
pub fn fig3_sweep(grid: &Grid) -> Result<Vec<SweepPoint>> {
    solve_two_qubit_two_loop(
        FIG3_OMEGA0,
        FIG3_OMEGA1,
        FIG3_J,
        &sorted(grid),
        &NewtonOptions::default(),
    )
}

fn status(point: &SweepPoint) -> Cell {
    match &point.result {
        Ok(_) => "ok".into(),
        Err(Error::NoConvergence { .. }) => "no_convergence".into(),
        Err(Error::Domain(_)) => "domain".into(),
        Err(_) => "error".into(),
    }
}

/// Loop-2 fields against `ω`.
pub fn fig3a(grid: &Grid) -> Result<FigureData> {
    let mut table = Table::new(&[
        "omega",
        "omega_prime",
        "omega0_prime",
        "omega1_prime",
        "status",
    ]);
    let mut failures = 0;
    for point in fig3_sweep(grid)? {
        let mut row: Vec<Cell> = vec![point.parameter.into()];
        match &point.result {
            Ok(sol) => {
                let l2 = &sol.plan.loop2;
                row.extend([l2.omega.into(), l2.omega0.into(), l2.omega1.into()]);
            }
            Err(_) => {
                failures += 1;
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty]);
            }
        }
        row.push(status(&point));
        table.push(row);
    }
    Ok(FigureData { table, failures })
}

/// Conditional geometric phases of the two-loop scheme against `ω`.
pub fn fig3b(grid: &Grid) -> Result<FigureData> {
    let mut table = Table::new(&["omega", "gamma0_over_pi", "gamma1_over_pi", "status"]);
    let mut failures = 0;
    for point in fig3_sweep(grid)? {
        let mut row: Vec<Cell> = vec![point.parameter.into()];
        match &point.result {
            Ok(sol) => {
                row.extend(sol.gamma_geometric.iter().map(|g| Cell::Num(g / PI)));
            }
            Err(_) => {
                failures += 1;
                row.extend([Cell::Empty, Cell::Empty]);
            }
        }
        row.push(status(&point));
        table.push(row);
    }
    Ok(FigureData { table, failures })
}

pub fn generate(figure: Figure, grid: &Grid) -> Result<FigureData> {
    match figure {
        Figure::Fig1 => fig1(grid),
        Figure::Fig2 => fig2(grid),
        Figure::Fig3a => fig3a(grid),
        Figure::Fig3b => fig3b(grid),
    }
}

/// Largest `|γ_d|` over both control states from integrating a solved
/// two-loop plan.
pub fn integrated_dynamic_phase(point: &SweepPoint, options: &EvolutionOptions) -> Result<f64> {
    let sol = point.result.as_ref().map_err(Clone::clone)?;
    let mut worst: f64 = 0.0;
    for delta in ControlState::BOTH {
        worst = worst.max(
            sol.plan
                .integrate(Some(delta), options)?
                .total
                .dynamic
                .abs(),
        );
    }
    Ok(worst)
}
