//! Output records of a scenario run.

use gasnet_core::{GasConstants, PipeState};
use serde::{Deserialize, Serialize};

/// Conserved and derived quantities of one state at position `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: f64,
    pub rho: f64,
    pub q: f64,
    /// Total energy density; full Euler model only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    pub p: f64,
    pub u: f64,
    pub s: f64,
    pub h: f64,
    pub c: f64,
}

impl Sample {
    pub fn of(x: f64, state: &PipeState, gas: &GasConstants) -> gasnet_core::Result<Self> {
        let th = state.thermo_quantities(gas)?;
        Ok(Self {
            x,
            rho: state.rho(),
            q: state.q(),
            energy: state.energy(),
            p: state.pressure(gas)?,
            u: state.velocity(),
            s: th.s,
            h: th.h,
            c: th.c,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipeSnapshot {
    pub pipe: String,
    /// State at `x = 0+`.
    pub trace: Sample,
    pub samples: Vec<Sample>,
}

/// Coupling residuals of the node traces and, for front tracking runs, the
/// Glimm functional terms.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Relative mass balance defect.
    pub mass_residual: f64,
    /// Junction: relative spread of the trace enthalpies. Compressor:
    /// relative defect of the enthalpy or power control.
    pub enthalpy_residual: f64,
    /// Junction: largest entropy defect of polytropic outlets against the
    /// mixed entropy. Compressor: inlet/outlet entropy defect.
    pub entropy_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave_strength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction_potential: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glimm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_variation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fronts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub time: f64,
    pub pipes: Vec<PipeSnapshot>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompressorSummary {
    pub pressure_ratio: f64,
    pub realized_enthalpy: f64,
    pub control_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_ratio_residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderDistance {
    pub epsilon_a: f64,
    pub epsilon_b: f64,
    /// `sum over pipes of ∫ |U_a - U_b|_1 dx` at the horizon.
    pub l1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mode: crate::scenario::Mode,
    pub converged: bool,
    /// Newton iterations of the initial node solve.
    pub newton_iterations: usize,
    pub snapshots: usize,
    pub max_mass_residual: f64,
    pub max_enthalpy_residual: f64,
    pub max_entropy_residual: f64,
    /// Wave interactions processed (zero for Riemann runs).
    pub interactions: usize,
    pub max_fronts: usize,
    /// Events at which the Glimm functional grew beyond round-off.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glimm_increases: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compressor: Option<CompressorSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ladder: Vec<LadderDistance>,
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub records: Vec<SnapshotRecord>,
    pub summary: Summary,
}
